#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mtec/core.hpp"
#include "mtec/device.hpp"
#include "mtec/links.hpp"
#include "mtec/size_regression.hpp"

namespace mtec {

/// Assign every participator to exactly one initiator, the one with minimal
/// round-trip time (ties go to the lexicographically smaller initiator id).
/// The resulting offloading networks are pairwise disjoint and cover the
/// whole participator set.
inline std::map<std::string, std::set<std::string>> partition_networks(
    const std::vector<std::string>& initiators, const std::vector<std::string>& participators,
    const link_table& links) {
    std::map<std::string, std::set<std::string>> out;
    if (initiators.empty()) {
        if (!participators.empty())
            throw config_error("partition_networks: no initiators for nonempty participator set");
        return out;
    }
    std::set<std::string> initiator_set(initiators.begin(), initiators.end());
    for (const auto& p : participators)
        if (initiator_set.count(p) != 0)
            throw config_error("partition_networks: '" + p +
                               "' is listed as both initiator and participator");

    for (const auto& id : initiator_set) out[id]; // empty networks are valid

    for (const auto& p : participators) {
        std::string best;
        double best_rtt = 0.0;
        for (const auto& init : initiator_set) {
            double r = links.rtt_between(init, p);
            if (best.empty() || r < best_rtt) {
                best = init;
                best_rtt = r;
            }
            // ties already resolved: initiator_set iterates in lexicographic
            // order and only strictly smaller rtt replaces the incumbent
        }
        out[best].insert(p);
    }
    return out;
}

} // namespace mtec
