#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mtec/core.hpp"
#include "mtec/device.hpp"
#include "mtec/links.hpp"
#include "mtec/rng.hpp"

namespace mtec {

struct traffic_entry {
    double start_time = 0.0;
    double factor = 1.0; // multiplicative speed factor in (0,1]
};

/// Background-traffic abstraction: a per-link schedule of multiplicative
/// speed factors plus optional seeded lognormal jitter. Jitter is a pure
/// function of (seed, link, time), so replays are exact.
struct traffic_model {
    std::map<std::pair<std::string, std::string>, std::vector<traffic_entry>> schedules;
    double jitter_sigma = 0.0;
    std::uint64_t jitter_seed = 0;

    double factor_at(const std::string& src, const std::string& dst, double time) const {
        auto it = schedules.find({src, dst});
        if (it == schedules.end()) return 1.0;
        double f = 1.0;
        for (const auto& e : it->second) {
            if (e.start_time > time) break;
            f = e.factor;
        }
        return f;
    }

    double jitter_at(const std::string& src, const std::string& dst, double time) const {
        if (jitter_sigma <= 0.0) return 1.0;
        std::uint64_t s = jitter_seed;
        splitmix64(s);
        s ^= hash_label(src);
        splitmix64(s);
        s ^= hash_label(dst);
        splitmix64(s);
        std::uint64_t time_bits;
        static_assert(sizeof(time_bits) == sizeof(time));
        std::memcpy(&time_bits, &time, sizeof(time_bits));
        s ^= time_bits;
        rng_stream stream(s);
        return std::exp(jitter_sigma * stream.normal());
    }

    double multiplier(const std::string& src, const std::string& dst, double time) const {
        return factor_at(src, dst, time) * jitter_at(src, dst, time);
    }

    /// Distinct schedule change points, for link_update events and traces.
    std::vector<double> change_times() const {
        std::vector<double> times;
        for (const auto& [link, entries] : schedules)
            for (const auto& e : entries) times.push_back(e.start_time);
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());
        return times;
    }

    void validate() const {
        for (const auto& [link, entries] : schedules) {
            double prev = -1.0;
            for (const auto& e : entries) {
                if (!(e.factor > 0.0 && e.factor <= 1.0))
                    throw config_error("traffic factor must lie in (0,1]");
                if (e.start_time < prev)
                    throw config_error("traffic schedule times must be nondecreasing");
                prev = e.start_time;
            }
        }
        if (jitter_sigma < 0.0) throw config_error("traffic jitter sigma must be >= 0");
    }
};

/// Snapshot of the link table with the traffic multipliers of `time`
/// applied to every speed; the base table is untouched.
inline link_table apply_traffic(const link_table& base, const traffic_model& model, double time) {
    link_table out = base;
    for (auto& [pair, speed] : out.speed) speed *= model.multiplier(pair.first, pair.second, time);
    return out;
}

struct arrival_process {
    int instance_count = 1;
    double horizon = 1.0; // arrival times are uniform over [0, horizon]

    void validate() const {
        if (instance_count < 1) throw config_error("arrivals: instance count must be >= 1");
        if (!(horizon > 0.0)) throw config_error("arrivals: horizon must be > 0");
    }
};

inline std::vector<double> draw_arrivals(const arrival_process& arrivals, std::uint64_t seed) {
    rng_stream stream = rng_stream::derive(seed, "arrivals");
    std::vector<double> times(static_cast<std::size_t>(arrivals.instance_count));
    for (auto& t : times) t = stream.uniform(0.0, arrivals.horizon);
    std::sort(times.begin(), times.end());
    return times;
}

/// Per-device exponential failure draws. Each device uses its own
/// sub-stream keyed by id, so fleet subsetting or scheduler choice never
/// shifts another device's draw. Only failures within the horizon are
/// reported.
inline std::vector<std::pair<std::string, double>> inject_failures(
    const std::vector<device_profile>& fleet, std::uint64_t seed, double horizon) {
    if (!(horizon > 0.0)) throw config_error("inject_failures: horizon must be > 0");
    std::vector<std::pair<std::string, double>> events;
    for (const auto& d : fleet) {
        rng_stream stream = rng_stream::derive(seed, "failures", hash_label(d.device_id));
        double t = stream.exponential(d.failure_rate);
        if (t <= horizon) events.emplace_back(d.device_id, t);
    }
    std::sort(events.begin(), events.end(),
              [](const auto& a, const auto& b) {
                  return a.second != b.second ? a.second < b.second : a.first < b.first;
              });
    return events;
}

} // namespace mtec
