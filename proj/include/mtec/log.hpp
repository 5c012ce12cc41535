#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace mtec::log {

enum class level { quiet = 0, info = 1, debug = 2 };

inline level threshold() {
    static level cached = [] {
        const char* env = std::getenv("MTEC_LOG");
        if (env == nullptr) return level::quiet;
        std::string v(env);
        if (v == "debug") return level::debug;
        if (v == "info") return level::info;
        return level::quiet;
    }();
    return cached;
}

inline bool enabled(level l) { return static_cast<int>(threshold()) >= static_cast<int>(l); }

inline void info(const std::string& msg) {
    if (enabled(level::info)) std::cerr << "[mtec] " << msg << '\n';
}

inline void debug(const std::string& msg) {
    if (enabled(level::debug)) std::cerr << "[mtec:debug] " << msg << '\n';
}

} // namespace mtec::log
