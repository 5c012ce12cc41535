#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mtec/core.hpp"
#include "mtec/dag.hpp"
#include "mtec/device.hpp"
#include "mtec/links.hpp"
#include "mtec/rng.hpp"
#include "mtec/size_regression.hpp"

namespace mtec {

/// Joint-objective configuration: convex weights over latency, failure
/// probability and cost, the failure threshold phi that triggers
/// replication, and the replication cap kappa.
struct weight_config {
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 0.0;
    double phi = 0.5;
    int kappa = 1;
    // Score terms normally live on different scales; latency and cost are
    // normalized by the queue-head values. Raw-unit scoring is kept behind
    // this flag for sensitivity checks.
    bool raw_score = false;

    void validate() const {
        if (alpha < 0.0 || beta < 0.0 || gamma < 0.0)
            throw config_error("weights: alpha, beta, gamma must be >= 0");
        if (std::abs(alpha + beta + gamma - 1.0) > 1e-9)
            throw config_error("weights: alpha + beta + gamma must equal 1 (got " +
                               std::to_string(alpha + beta + gamma) + ")");
        if (!(phi > 0.0 && phi < 1.0))
            throw config_error("weights: phi must lie in (0,1)");
        if (kappa < 1) throw config_error("weights: kappa must be >= 1");
    }
};

/// One row of the per-task latency queue: the three latency components of
/// running the task on one device, already filtered for eligibility.
struct candidate_entry {
    std::string device_id;
    double est_exec = 0.0;     // interference-adjusted execution seconds
    double est_model_dl = 0.0; // model download seconds (0 when cached)
    double est_data_in = 0.0;  // summed input transfer seconds
    double est_total = 0.0;
};

struct task_placement {
    std::string task_id;
    std::string primary_device;
    std::vector<std::string> replicas; // primary first
    double est_latency = 0.0;
    double est_failure = 0.0;
    double est_cost = 0.0;
};

struct placement {
    std::map<std::string, task_placement> tasks;
    double est_app_latency = 0.0;
    double est_app_failure = 0.0;
    double est_app_cost = 0.0;
};

/// One input a candidate task must have on its device before executing.
/// `sources` lists every device holding a copy (all replicas of the
/// producer, or the initiator for external input); the estimate picks the
/// fastest link, and a source equal to the candidate device makes the input
/// resident (zero transfer).
struct input_source {
    std::vector<std::string> sources;
    double bytes = 0.0;
};

struct task_inputs {
    std::string model_source; // device models are downloaded from
    std::vector<input_source> inputs;
};

using fleet_state = std::map<std::string, device_state>;

inline double best_input_transfer(const input_source& in, const std::string& device,
                                  const link_table& links) {
    if (in.sources.empty()) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& src : in.sources)
        best = std::min(best, links.transfer_seconds(src, device, in.bytes));
    return best;
}

/// Latency components of one task on one device, or nullopt when the device
/// is ineligible (dead, unprofiled, or short on memory).
inline std::optional<candidate_entry> estimate_candidate(const task_spec& task,
                                                         const device_state& device,
                                                         const link_table& links,
                                                         const task_inputs& inputs) {
    if (!device.alive) return std::nullopt;
    if (!device.profile.profiled_for(task.task_type)) return std::nullopt;
    if (device.mem_free < task.mem_required) return std::nullopt;

    candidate_entry e;
    e.device_id = device.profile.device_id;
    e.est_exec = estimate_exec_time(device, task);
    if (task.model_id.has_value() && device.profile.cached_models.count(*task.model_id) == 0)
        e.est_model_dl = links.transfer_seconds(inputs.model_source, e.device_id,
                                                static_cast<double>(task.model_size));
    for (const auto& in : inputs.inputs) e.est_data_in += best_input_transfer(in, e.device_id, links);
    e.est_total = e.est_exec + e.est_model_dl + e.est_data_in;
    return e;
}

/// Per-task candidate ranking: one entry per eligible device, sorted by
/// total estimated latency ascending, ties broken by device id.
inline std::vector<candidate_entry> min_latency_queue(const task_spec& task,
                                                      const fleet_state& fleet,
                                                      const link_table& links,
                                                      const task_inputs& inputs) {
    std::vector<candidate_entry> queue;
    for (const auto& [id, device] : fleet) {
        auto entry = estimate_candidate(task, device, links, inputs);
        if (entry.has_value()) queue.push_back(*entry);
    }
    if (queue.empty())
        throw no_eligible_device("no eligible device for task '" + task.task_id + "'");
    std::stable_sort(queue.begin(), queue.end(),
                     [](const candidate_entry& a, const candidate_entry& b) {
                         if (a.est_total != b.est_total) return a.est_total < b.est_total;
                         return a.device_id < b.device_id;
                     });
    return queue;
}

/// A task with replicas fails only when every replica's device fails within
/// its own execution window; replica failures are independent.
inline double task_failure_prob(const std::vector<std::pair<double, double>>& lambda_window) {
    double p = 1.0;
    for (const auto& [lambda, window] : lambda_window) p *= device_failure_prob(lambda, window);
    return p;
}

/// Cost of a task is the sum over replicas of execution seconds times the
/// device's unit-time rate; transfers are free.
inline double task_cost(const std::vector<std::pair<double, double>>& rate_exec) {
    double c = 0.0;
    for (const auto& [rate, exec_seconds] : rate_exec) c += rate * exec_seconds;
    return c;
}

/// One considered replication step, exposed so tests can assert the
/// accept/reject contract.
struct replication_step {
    std::string device_id;
    double weight_before = 0.0;
    double weight_after = 0.0;
    double failure_before = 0.0;
    double failure_after = 0.0;
    bool accepted = false;
};

struct reduction_trace {
    std::vector<replication_step> steps;
};

/// Failure/cost reduction over the latency queue. The head candidate seeds
/// the placement; while its combined failure probability stays at or above
/// phi and fewer than kappa replicas are placed, the next queue entry is
/// scored with the replica's added cost and the combined failure product,
/// and accepted only if the weighted score does not increase. A single
/// rejection ends the loop.
inline task_placement pf_cost_reduction(const std::vector<candidate_entry>& queue,
                                        const task_spec& task, const weight_config& weights,
                                        const fleet_state& fleet,
                                        reduction_trace* trace = nullptr) {
    if (queue.empty())
        throw no_eligible_device("empty candidate queue for task '" + task.task_id + "'");

    auto rate_of = [&fleet](const std::string& id) { return fleet.at(id).profile.cost_rate; };
    auto lambda_of = [&fleet](const std::string& id) { return fleet.at(id).profile.failure_rate; };

    const candidate_entry& head = queue.front();
    task_placement p;
    p.task_id = task.task_id;
    p.primary_device = head.device_id;
    p.replicas = {head.device_id};
    p.est_latency = head.est_total;
    p.est_failure = device_failure_prob(lambda_of(head.device_id), head.est_total);
    p.est_cost = rate_of(head.device_id) * head.est_exec;

    const double latency_den = head.est_total > 0.0 ? head.est_total : 1.0;
    const double cost_den = p.est_cost > 0.0 ? p.est_cost : 1.0;
    auto score = [&](double failure, double cost) {
        if (weights.raw_score)
            return weights.alpha * p.est_latency + weights.beta * failure + weights.gamma * cost;
        return weights.alpha * (p.est_latency / latency_den) + weights.beta * failure +
               weights.gamma * (cost / cost_den);
    };

    double weight_s = score(p.est_failure, p.est_cost);
    std::size_t next = 1;
    while (p.est_failure >= weights.phi && static_cast<int>(p.replicas.size()) < weights.kappa &&
           next < queue.size()) {
        const candidate_entry& cand = queue[next];
        double failure_new =
            p.est_failure * device_failure_prob(lambda_of(cand.device_id), cand.est_total);
        double cost_new = p.est_cost + rate_of(cand.device_id) * cand.est_exec;
        double weight_new = score(failure_new, cost_new);
        bool accepted = weight_new <= weight_s;
        if (trace != nullptr)
            trace->steps.push_back(
                {cand.device_id, weight_s, weight_new, p.est_failure, failure_new, accepted});
        if (!accepted) break;
        p.replicas.push_back(cand.device_id);
        p.est_failure = failure_new;
        p.est_cost = cost_new;
        weight_s = weight_new;
        ++next;
    }
    return p;
}

enum class scheduler_kind { mtec, round_robin, random, latency_only };

inline const char* to_string(scheduler_kind k) {
    switch (k) {
        case scheduler_kind::mtec: return "mtec";
        case scheduler_kind::round_robin: return "round_robin";
        case scheduler_kind::random: return "random";
        case scheduler_kind::latency_only: return "latency_only";
    }
    return "unknown";
}

inline scheduler_kind scheduler_from_string(const std::string& s) {
    if (s == "mtec") return scheduler_kind::mtec;
    if (s == "round_robin") return scheduler_kind::round_robin;
    if (s == "random") return scheduler_kind::random;
    if (s == "latency_only") return scheduler_kind::latency_only;
    throw config_error("unknown scheduler '" + s +
                       "' (expected mtec|round_robin|random|latency_only)");
}

namespace detail {

/// Predicted input/output bytes per task, walked in stage order so producer
/// predictions feed consumer inputs.
struct predicted_sizes {
    std::map<std::string, double> input_bytes;
    std::map<std::string, double> output_bytes;
};

inline predicted_sizes predict_sizes(const staged_dag& staged, const size_regression& sizes) {
    predicted_sizes out;
    for (const auto& stage : staged.stages)
        for (const auto& id : stage) {
            const task_spec& t = *staged.dag.find_task(id);
            double in = static_cast<double>(t.base_input_size);
            for (const auto& producer : staged.dag.producers_of(id))
                in += out.output_bytes.at(producer);
            out.input_bytes[id] = in;
            out.output_bytes[id] = sizes.predict(t.task_type, in, t.output_size_hint);
        }
    return out;
}

inline task_inputs gather_inputs(const staged_dag& staged, const std::string& task_id,
                                 const std::string& initiator,
                                 const std::map<std::string, task_placement>& placed,
                                 const predicted_sizes& sizes) {
    const task_spec& t = *staged.dag.find_task(task_id);
    task_inputs in;
    in.model_source = initiator;
    if (t.base_input_size > 0)
        in.inputs.push_back({{initiator}, static_cast<double>(t.base_input_size)});
    for (const auto& producer : staged.dag.producers_of(task_id))
        in.inputs.push_back({placed.at(producer).replicas, sizes.output_bytes.at(producer)});
    return in;
}

/// Book a placed replica set into the planning fleet copy so later tasks see
/// the co-location and memory effects of earlier decisions.
inline void book_placement(fleet_state& fleet, const task_spec& task, const task_placement& p) {
    for (const auto& dev_id : p.replicas) {
        device_state& d = fleet.at(dev_id);
        d.add_running(task.task_type);
        d.reserve_memory(task.mem_required);
        if (task.model_id.has_value() && d.profile.cached_models.count(*task.model_id) == 0) {
            d.profile.cached_models.insert(*task.model_id);
            d.reserve_memory(task.model_size);
        }
    }
}

inline void finalize_app_estimates(const staged_dag& staged, placement& p) {
    p.est_app_latency = 0.0;
    p.est_app_cost = 0.0;
    double success = 1.0;
    for (const auto& stage : staged.stages) {
        double stage_latency = 0.0;
        for (const auto& id : stage)
            stage_latency = std::max(stage_latency, p.tasks.at(id).est_latency);
        p.est_app_latency += stage_latency;
    }
    for (const auto& [id, tp] : p.tasks) {
        p.est_app_cost += tp.est_cost;
        success *= 1.0 - tp.est_failure;
    }
    p.est_app_failure = 1.0 - success;
}

} // namespace detail

/// Full application scheduling: stages in order, tasks within a stage in
/// task-id order, each through the latency queue and the failure/cost
/// reduction. The fleet argument is a planning copy updated as placements
/// are made.
inline placement schedule_application(const staged_dag& staged, fleet_state fleet,
                                      const link_table& links, const weight_config& weights,
                                      const size_regression& sizes,
                                      const std::string& initiator) {
    auto predicted = detail::predict_sizes(staged, sizes);
    placement result;
    for (const auto& stage : staged.stages)
        for (const auto& id : stage) {
            const task_spec& task = *staged.dag.find_task(id);
            auto inputs = detail::gather_inputs(staged, id, initiator, result.tasks, predicted);
            auto queue = min_latency_queue(task, fleet, links, inputs);
            auto tp = pf_cost_reduction(queue, task, weights, fleet);
            detail::book_placement(fleet, task, tp);
            result.tasks[id] = std::move(tp);
        }
    detail::finalize_app_estimates(staged, result);
    return result;
}

/// Round-robin cursor carried across instances of one simulation run.
struct round_robin_state {
    std::size_t cursor = 0;
};

/// Comparison baselines. Round robin cycles devices in id order, random
/// draws uniformly among eligible devices from the given stream, and
/// latency-only takes the queue head with replication disabled. All respect
/// memory, profiling and liveness eligibility.
inline placement baseline_schedule(scheduler_kind kind, const staged_dag& staged,
                                   fleet_state fleet, const link_table& links,
                                   const size_regression& sizes, const std::string& initiator,
                                   rng_stream& random_stream,
                                   round_robin_state* rr_state = nullptr) {
    auto predicted = detail::predict_sizes(staged, sizes);
    std::vector<std::string> device_order;
    for (const auto& [id, state] : fleet) device_order.push_back(id);

    round_robin_state local_rr;
    round_robin_state& rr = rr_state != nullptr ? *rr_state : local_rr;

    placement result;
    for (const auto& stage : staged.stages)
        for (const auto& id : stage) {
            const task_spec& task = *staged.dag.find_task(id);
            auto inputs = detail::gather_inputs(staged, id, initiator, result.tasks, predicted);

            candidate_entry chosen;
            if (kind == scheduler_kind::latency_only) {
                chosen = min_latency_queue(task, fleet, links, inputs).front();
            } else if (kind == scheduler_kind::round_robin) {
                bool found = false;
                for (std::size_t step = 0; step < device_order.size(); ++step) {
                    const auto& dev = device_order[(rr.cursor + step) % device_order.size()];
                    auto entry = estimate_candidate(task, fleet.at(dev), links, inputs);
                    if (entry.has_value()) {
                        chosen = *entry;
                        rr.cursor = (rr.cursor + step + 1) % device_order.size();
                        found = true;
                        break;
                    }
                }
                if (!found)
                    throw no_eligible_device("no eligible device for task '" + task.task_id + "'");
            } else { // random
                std::vector<candidate_entry> eligible;
                for (const auto& dev : device_order) {
                    auto entry = estimate_candidate(task, fleet.at(dev), links, inputs);
                    if (entry.has_value()) eligible.push_back(*entry);
                }
                if (eligible.empty())
                    throw no_eligible_device("no eligible device for task '" + task.task_id + "'");
                chosen = eligible[static_cast<std::size_t>(
                    random_stream.next_below(eligible.size()))];
            }

            task_placement tp;
            tp.task_id = task.task_id;
            tp.primary_device = chosen.device_id;
            tp.replicas = {chosen.device_id};
            tp.est_latency = chosen.est_total;
            tp.est_failure =
                device_failure_prob(fleet.at(chosen.device_id).profile.failure_rate,
                                    chosen.est_total);
            tp.est_cost = fleet.at(chosen.device_id).profile.cost_rate * chosen.est_exec;
            detail::book_placement(fleet, task, tp);
            result.tasks[id] = std::move(tp);
        }
    detail::finalize_app_estimates(staged, result);
    return result;
}

} // namespace mtec
