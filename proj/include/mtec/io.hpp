#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "mtec/core.hpp"
#include "mtec/scenario.hpp"

namespace mtec {

namespace detail {

inline nlohmann::json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open file '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("malformed JSON in '" + path.string() + "': " + e.what());
    }
    return j;
}

template <typename T>
T require(const nlohmann::json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw config_error(where + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw config_error(where + ": field '" + key + "' has the wrong type");
    }
}

template <typename T>
T optional_field(const nlohmann::json& j, const std::string& key, T fallback,
                 const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw config_error(where + ": field '" + key + "' has the wrong type");
    }
}

} // namespace detail

/// DAG file format:
/// { "app_id": str,
///   "tasks": [ {"task_id","task_type","mem_required","model_id"?,
///               "model_size"?,"base_input_size","output_size_hint"?} ],
///   "edges": [ [from, to], ... ] }
inline application_dag parse_dag(const nlohmann::json& j, const std::string& where) {
    application_dag dag;
    dag.app_id = detail::require<std::string>(j, "app_id", where);
    if (!j.contains("tasks") || !j.at("tasks").is_array())
        throw config_error(where + ": 'tasks' must be an array");
    for (const auto& tj : j.at("tasks")) {
        task_spec t;
        t.task_id = detail::require<std::string>(tj, "task_id", where);
        t.task_type = detail::require<std::string>(tj, "task_type", where);
        t.mem_required = detail::require<bytes_t>(tj, "mem_required", where + " task " + t.task_id);
        if (tj.contains("model_id")) {
            t.model_id = tj.at("model_id").get<std::string>();
            t.model_size =
                detail::require<bytes_t>(tj, "model_size", where + " task " + t.task_id);
        }
        t.base_input_size =
            detail::require<bytes_t>(tj, "base_input_size", where + " task " + t.task_id);
        if (tj.contains("output_size_hint"))
            t.output_size_hint = tj.at("output_size_hint").get<bytes_t>();
        dag.tasks.push_back(std::move(t));
    }
    if (!j.contains("edges") || !j.at("edges").is_array())
        throw config_error(where + ": 'edges' must be an array");
    for (const auto& ej : j.at("edges")) {
        if (!ej.is_array() || ej.size() != 2)
            throw config_error(where + ":每 edge must be a [from, to] pair");
        dag.edges.emplace_back(ej.at(0).get<std::string>(), ej.at(1).get<std::string>());
    }
    return dag;
}

inline application_dag load_dag(const std::filesystem::path& path) {
    return parse_dag(detail::load_json_file(path), "dag file " + path.string());
}

struct fleet_file {
    std::vector<device_profile> devices;
    std::map<std::pair<std::string, std::string>, double> link_rtts;
    double eta = 1.5;
};

/// Fleet file format:
/// { "devices": [ {"device_id","tier","mem_total","cost_rate","failure_rate",
///                 "cached_models":[], "interference":{type:[base,slope]},
///                 "initiator_capable":bool} ],
///   "links": [ {"src","dst","rtt_seconds"} ],
///   "eta": number }
/// Missing link entries fall back to the scenario's default_rtt_seconds.
inline fleet_file parse_fleet(const nlohmann::json& j, const std::string& where) {
    fleet_file fleet;
    if (!j.contains("devices") || !j.at("devices").is_array())
        throw config_error(where + ": 'devices' must be an array");
    for (const auto& dj : j.at("devices")) {
        device_profile d;
        d.device_id = detail::require<std::string>(dj, "device_id", where);
        const std::string ctx = where + " device " + d.device_id;
        d.device_tier = tier_from_string(detail::require<std::string>(dj, "tier", ctx));
        d.mem_total = detail::require<bytes_t>(dj, "mem_total", ctx);
        d.cost_rate = detail::require<double>(dj, "cost_rate", ctx);
        d.failure_rate = detail::require<double>(dj, "failure_rate", ctx);
        if (dj.contains("cached_models"))
            for (const auto& m : dj.at("cached_models"))
                d.cached_models.insert(m.get<std::string>());
        if (dj.contains("interference"))
            for (const auto& [type, coeffs] : dj.at("interference").items()) {
                if (!coeffs.is_array() || coeffs.size() != 2)
                    throw config_error(ctx + ": interference entries must be [base, slope]");
                d.interference[type] = {coeffs.at(0).get<double>(), coeffs.at(1).get<double>()};
            }
        d.initiator_capable = detail::optional_field<bool>(dj, "initiator_capable", false, ctx);
        fleet.devices.push_back(std::move(d));
    }
    if (j.contains("links"))
        for (const auto& lj : j.at("links")) {
            auto src = detail::require<std::string>(lj, "src", where + " links");
            auto dst = detail::require<std::string>(lj, "dst", where + " links");
            auto rtt = detail::require<double>(lj, "rtt_seconds", where + " links");
            fleet.link_rtts[{src, dst}] = rtt;
        }
    fleet.eta = detail::optional_field<double>(j, "eta", 1.5, where);
    return fleet;
}

inline fleet_file load_fleet(const std::filesystem::path& path) {
    return parse_fleet(detail::load_json_file(path), "fleet file " + path.string());
}

/// Scenario file format (paths are resolved relative to the scenario file):
/// { "scenario_id": str, "fleet": path, "dag": path,
///   "arrivals": {"count","horizon_seconds"},
///   "weights": {"alpha","beta","gamma","phi","kappa"},
///   "eta"?: num, "probe_packet_bytes"?: int, "probe_interval_seconds"?: num,
///   "default_rtt_seconds"?: num,
///   "traffic"?: {"links":[{"src","dst","schedule":[[t,factor],..]}],
///                "jitter_sigma"?: num},
///   "failures"?: {"enabled": bool}, "scheduler"?: str,
///   "seeds": [int,...], "raw_score"?: bool }
inline scenario_config load_scenario(const std::filesystem::path& path) {
    const std::string where = "scenario file " + path.string();
    nlohmann::json j = detail::load_json_file(path);
    scenario_config sc;
    sc.scenario_id = detail::require<std::string>(j, "scenario_id", where);

    auto base_dir = path.parent_path();
    auto fleet_path = base_dir / detail::require<std::string>(j, "fleet", where);
    auto dag_path = base_dir / detail::require<std::string>(j, "dag", where);
    fleet_file fleet = load_fleet(fleet_path);
    sc.devices = std::move(fleet.devices);
    sc.link_rtts = std::move(fleet.link_rtts);
    sc.eta = fleet.eta;
    sc.dag = load_dag(dag_path);

    const auto& aj = j.at("arrivals");
    sc.arrivals.instance_count = detail::require<int>(aj, "count", where + " arrivals");
    sc.arrivals.horizon = detail::require<double>(aj, "horizon_seconds", where + " arrivals");

    const auto& wj = j.at("weights");
    sc.weights.alpha = detail::require<double>(wj, "alpha", where + " weights");
    sc.weights.beta = detail::require<double>(wj, "beta", where + " weights");
    sc.weights.gamma = detail::require<double>(wj, "gamma", where + " weights");
    sc.weights.phi = detail::require<double>(wj, "phi", where + " weights");
    sc.weights.kappa = detail::require<int>(wj, "kappa", where + " weights");
    sc.weights.raw_score = detail::optional_field<bool>(j, "raw_score", false, where);

    sc.eta = detail::optional_field<double>(j, "eta", sc.eta, where);
    sc.probe_packet_bytes =
        detail::optional_field<bytes_t>(j, "probe_packet_bytes", 1'000'000, where);
    sc.probe_interval_seconds =
        detail::optional_field<double>(j, "probe_interval_seconds", 5.0, where);
    sc.default_rtt_seconds = detail::optional_field<double>(j, "default_rtt_seconds", 0.05, where);

    if (j.contains("traffic")) {
        const auto& tj = j.at("traffic");
        if (tj.contains("links"))
            for (const auto& lj : tj.at("links")) {
                auto src = detail::require<std::string>(lj, "src", where + " traffic");
                auto dst = detail::require<std::string>(lj, "dst", where + " traffic");
                std::vector<traffic_entry> entries;
                for (const auto& e : lj.at("schedule")) {
                    if (!e.is_array() || e.size() != 2)
                        throw config_error(where +
                                           " traffic: schedule entries must be [time, factor]");
                    entries.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
                }
                sc.traffic.schedules[{src, dst}] = std::move(entries);
            }
        sc.traffic.jitter_sigma =
            detail::optional_field<double>(tj, "jitter_sigma", 0.0, where + " traffic");
    }

    if (j.contains("failures"))
        sc.failures_enabled =
            detail::optional_field<bool>(j.at("failures"), "enabled", false, where + " failures");

    sc.scheduler = scheduler_from_string(
        detail::optional_field<std::string>(j, "scheduler", "mtec", where));

    if (!j.contains("seeds") || !j.at("seeds").is_array() || j.at("seeds").empty())
        throw config_error(where + ": 'seeds' must be a nonempty array");
    for (const auto& s : j.at("seeds")) sc.seeds.push_back(s.get<std::uint64_t>());

    sc.validate();
    return sc;
}

} // namespace mtec
