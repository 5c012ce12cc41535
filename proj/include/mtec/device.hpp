#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>

#include "mtec/core.hpp"
#include "mtec/dag.hpp"

namespace mtec {

enum class tier { cloud, edge_cloud, cell_site };

inline const char* to_string(tier t) {
    switch (t) {
        case tier::cloud: return "cloud";
        case tier::edge_cloud: return "edge_cloud";
        case tier::cell_site: return "cell_site";
    }
    return "unknown";
}

inline tier tier_from_string(const std::string& s) {
    if (s == "cloud") return tier::cloud;
    if (s == "edge_cloud") return tier::edge_cloud;
    if (s == "cell_site") return tier::cell_site;
    throw config_error("unknown tier '" + s + "' (expected cloud|edge_cloud|cell_site)");
}

/// Linear interference predictor for one task type on one device:
/// execution takes base_seconds plus slope_seconds per distinct co-located
/// task type.
struct interference_coeffs {
    double base_seconds = 0.0;
    double slope_seconds = 0.0;
};

struct device_profile {
    std::string device_id;
    tier device_tier = tier::cell_site;
    bytes_t mem_total = 0;
    double cost_rate = 0.0;    // dollars per second of execution
    double failure_rate = 0.0; // lambda, failures per second
    std::set<std::string> cached_models;
    std::map<std::string, interference_coeffs> interference; // task_type -> coeffs
    bool initiator_capable = false;

    bool profiled_for(const std::string& task_type) const {
        return interference.count(task_type) != 0;
    }
};

/// Mutable runtime view of one device. Kept as a plain value; only the
/// simulation loop mutates it.
struct device_state {
    device_profile profile;
    bytes_t mem_free = 0;
    std::map<std::string, int> running_task_types; // multiset: type -> count
    bool alive = true;

    int distinct_running_types() const {
        int n = 0;
        for (const auto& [type, count] : running_task_types)
            if (count > 0) ++n;
        return n;
    }

    void add_running(const std::string& task_type) { ++running_task_types[task_type]; }

    void remove_running(const std::string& task_type) {
        auto it = running_task_types.find(task_type);
        if (it == running_task_types.end()) return;
        if (--it->second <= 0) running_task_types.erase(it);
    }

    void reserve_memory(bytes_t amount) { mem_free = amount >= mem_free ? 0 : mem_free - amount; }
    void release_memory(bytes_t amount) {
        bytes_t total = profile.mem_total;
        mem_free = (mem_free + amount > total) ? total : mem_free + amount;
    }
};

/// Fresh state for a device: cached model bytes are charged against free
/// memory up front.
inline device_state initial_state(const device_profile& profile,
                                  const std::map<std::string, bytes_t>& model_sizes) {
    device_state s;
    s.profile = profile;
    s.mem_free = profile.mem_total;
    for (const auto& model : profile.cached_models) {
        auto it = model_sizes.find(model);
        if (it != model_sizes.end()) s.reserve_memory(it->second);
    }
    return s;
}

/// Interference-based service time: base + slope * k where k is the number
/// of distinct task types already running on the device. The candidate task
/// itself is not counted, so an idle device returns the profiled base time.
inline double estimate_exec_time(const device_state& device, const task_spec& task) {
    auto it = device.profile.interference.find(task.task_type);
    if (it == device.profile.interference.end())
        throw unprofiled_device("device '" + device.profile.device_id +
                                "' has no profile for task type '" + task.task_type + "'");
    int k = device.distinct_running_types();
    return it->second.base_seconds + it->second.slope_seconds * static_cast<double>(k);
}

/// P(device fails within the window) = 1 - exp(-lambda * window).
inline double device_failure_prob(double failure_rate, double window_seconds) {
    if (failure_rate <= 0.0 || window_seconds <= 0.0) return 0.0;
    return -std::expm1(-failure_rate * window_seconds);
}

} // namespace mtec
