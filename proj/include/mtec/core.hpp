#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mtec {

using bytes_t = std::uint64_t;

// Scenario or input file is malformed; carries a named diagnostic.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// The device has no interference profile for the requested task type and
// must be excluded from candidacy.
struct unprofiled_device : std::runtime_error {
    explicit unprofiled_device(const std::string& what) : std::runtime_error(what) {}
};

// Every device was filtered out for a task; the instance cannot be scheduled.
struct no_eligible_device : std::runtime_error {
    explicit no_eligible_device(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mtec
