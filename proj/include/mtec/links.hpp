#pragma once

#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mtec/core.hpp"

namespace mtec {

/// Two-way probe estimate divided by the over-provision factor eta:
/// speed = 2 * packet / (rtt * eta). Eta >= 1 only ever slows the estimate
/// down, hedging against network drift between probe and dispatch.
inline double probe_speed(double rtt_seconds, bytes_t packet_bytes, double eta) {
    if (rtt_seconds <= 0.0) throw config_error("probe_speed: rtt must be > 0");
    if (packet_bytes == 0) throw config_error("probe_speed: packet size must be > 0");
    if (eta < 1.0) throw config_error("probe_speed: eta must be >= 1");
    return 2.0 * static_cast<double>(packet_bytes) / (rtt_seconds * eta);
}

/// Directed pairwise transmission-speed table. Speed values already include
/// the 1/eta factor; local transfers (src == dst) are instantaneous.
struct link_table {
    std::map<std::pair<std::string, std::string>, double> speed; // bytes per second
    std::map<std::pair<std::string, std::string>, double> rtt;   // seconds
    double eta = 1.0;
    double default_rtt = 0.05;
    bytes_t probe_packet = 1'000'000;

    double rtt_between(const std::string& src, const std::string& dst) const {
        if (src == dst) return 0.0;
        auto it = rtt.find({src, dst});
        return it != rtt.end() ? it->second : default_rtt;
    }

    double speed_between(const std::string& src, const std::string& dst) const {
        if (src == dst) return std::numeric_limits<double>::infinity();
        auto it = speed.find({src, dst});
        if (it != speed.end()) return it->second;
        return probe_speed(rtt_between(src, dst), probe_packet, eta);
    }

    double transfer_seconds(const std::string& src, const std::string& dst,
                            double transfer_bytes) const {
        if (src == dst || transfer_bytes <= 0.0) return 0.0;
        return transfer_bytes / speed_between(src, dst);
    }
};

/// Build the eta-adjusted table for every ordered device pair from base
/// round-trip times.
inline link_table build_link_table(
    const std::vector<std::string>& device_ids,
    const std::map<std::pair<std::string, std::string>, double>& rtts, double eta,
    bytes_t probe_packet, double default_rtt) {
    link_table t;
    t.eta = eta;
    t.default_rtt = default_rtt;
    t.probe_packet = probe_packet;
    t.rtt = rtts;
    for (const auto& src : device_ids)
        for (const auto& dst : device_ids) {
            if (src == dst) continue;
            double r = t.rtt_between(src, dst);
            t.speed[{src, dst}] = probe_speed(r, probe_packet, eta);
        }
    return t;
}

} // namespace mtec
