#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mtec/core.hpp"
#include "mtec/dag.hpp"
#include "mtec/device.hpp"
#include "mtec/links.hpp"
#include "mtec/scheduler.hpp"
#include "mtec/traffic.hpp"

namespace mtec {

/// Everything one simulation run needs: the fleet, the application, the
/// network, the objective weights and the experiment knobs.
struct scenario_config {
    std::string scenario_id;
    application_dag dag;
    std::vector<device_profile> devices;
    std::map<std::pair<std::string, std::string>, double> link_rtts;
    double eta = 1.5;
    double default_rtt_seconds = 0.05;
    bytes_t probe_packet_bytes = 1'000'000;
    double probe_interval_seconds = 5.0;
    arrival_process arrivals;
    weight_config weights;
    traffic_model traffic;
    bool failures_enabled = false;
    scheduler_kind scheduler = scheduler_kind::mtec;
    std::vector<std::uint64_t> seeds;

    const device_profile* find_device(const std::string& id) const {
        for (const auto& d : devices)
            if (d.device_id == id) return &d;
        return nullptr;
    }

    /// The lexicographically smallest initiator-capable device originates
    /// all offloading requests of the run.
    std::string initiator_id() const {
        std::string best;
        for (const auto& d : devices)
            if (d.initiator_capable && (best.empty() || d.device_id < best)) best = d.device_id;
        return best;
    }

    std::map<std::string, bytes_t> model_sizes() const {
        std::map<std::string, bytes_t> sizes;
        for (const auto& t : dag.tasks)
            if (t.model_id.has_value()) sizes[*t.model_id] = t.model_size;
        return sizes;
    }

    link_table build_links() const {
        std::vector<std::string> ids;
        for (const auto& d : devices) ids.push_back(d.device_id);
        return build_link_table(ids, link_rtts, eta, probe_packet_bytes, default_rtt_seconds);
    }

    void validate() const {
        if (devices.empty()) throw config_error("scenario: fleet is empty");
        std::set<std::string> ids;
        for (const auto& d : devices) {
            if (!ids.insert(d.device_id).second)
                throw config_error("scenario: duplicate device_id '" + d.device_id + "'");
            if (d.mem_total == 0)
                throw config_error("device '" + d.device_id + "': mem_total must be > 0");
            if (d.cost_rate < 0.0)
                throw config_error("device '" + d.device_id + "': cost_rate must be >= 0");
            if (d.failure_rate < 0.0)
                throw config_error("device '" + d.device_id + "': failure_rate must be >= 0");
            for (const auto& [type, coeffs] : d.interference) {
                if (!(coeffs.base_seconds > 0.0))
                    throw config_error("device '" + d.device_id + "', task type '" + type +
                                       "': base_seconds must be > 0");
                if (coeffs.slope_seconds < 0.0)
                    throw config_error("device '" + d.device_id + "', task type '" + type +
                                       "': slope_seconds must be >= 0");
            }
        }
        if (initiator_id().empty())
            throw config_error("scenario: no initiator-capable device in the fleet");
        for (const auto& [pair, r] : link_rtts)
            if (!(r > 0.0))
                throw config_error("link " + pair.first + " -> " + pair.second +
                                   ": rtt_seconds must be > 0");
        if (eta < 1.0) throw config_error("scenario: eta must be >= 1");
        if (!(default_rtt_seconds > 0.0))
            throw config_error("scenario: default_rtt_seconds must be > 0");
        if (probe_packet_bytes == 0) throw config_error("scenario: probe_packet_bytes must be > 0");
        if (!(probe_interval_seconds > 0.0))
            throw config_error("scenario: probe_interval_seconds must be > 0");
        arrivals.validate();
        weights.validate();
        traffic.validate();
        if (seeds.empty()) throw config_error("scenario: at least one seed is required");

        auto dag_check = validate_dag(dag);
        if (!dag_check.ok())
            throw config_error("scenario DAG invalid: " + dag_check.violations.front().message);
    }
};

} // namespace mtec
