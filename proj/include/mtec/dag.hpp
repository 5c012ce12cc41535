#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mtec/core.hpp"

namespace mtec {

/// One task of a DAG application. `mem_required` covers data and model
/// memory during execution; `base_input_size` is the externally supplied
/// input (0 when all inputs are intermediate files).
struct task_spec {
    std::string task_id;
    std::string task_type;
    bytes_t mem_required = 0;
    std::optional<std::string> model_id;
    bytes_t model_size = 0;
    bytes_t base_input_size = 0;
    std::optional<bytes_t> output_size_hint;
};

/// A DAG application: nodes are tasks, edges are producer -> consumer
/// data dependencies.
struct application_dag {
    std::string app_id;
    std::vector<task_spec> tasks;
    std::vector<std::pair<std::string, std::string>> edges;

    const task_spec* find_task(const std::string& id) const {
        for (const auto& t : tasks)
            if (t.task_id == id) return &t;
        return nullptr;
    }

    std::vector<std::string> producers_of(const std::string& id) const {
        std::vector<std::string> out;
        for (const auto& [from, to] : edges)
            if (to == id) out.push_back(from);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<std::string> consumers_of(const std::string& id) const {
        std::vector<std::string> out;
        for (const auto& [from, to] : edges)
            if (from == id) out.push_back(to);
        std::sort(out.begin(), out.end());
        return out;
    }
};

enum class violation_kind {
    empty_graph,
    duplicate_task,
    bad_task_field,
    dangling_edge,
    self_edge,
    duplicate_edge,
    cycle,
};

struct violation {
    violation_kind kind;
    std::string message;
};

struct validation_result {
    std::vector<violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Structural validation. Violations are data, not faults: the result lists
/// everything wrong with the graph instead of stopping at the first issue.
inline validation_result validate_dag(const application_dag& dag) {
    validation_result res;
    auto add = [&res](violation_kind k, std::string msg) {
        res.violations.push_back({k, std::move(msg)});
    };

    if (dag.tasks.empty()) {
        add(violation_kind::empty_graph, "application '" + dag.app_id + "' has no tasks");
        return res;
    }

    std::set<std::string> ids;
    for (const auto& t : dag.tasks) {
        if (!ids.insert(t.task_id).second)
            add(violation_kind::duplicate_task, "duplicate task_id '" + t.task_id + "'");
        if (t.mem_required == 0)
            add(violation_kind::bad_task_field,
                "task '" + t.task_id + "': mem_required must be > 0");
        if (t.model_id.has_value() && t.model_size == 0)
            add(violation_kind::bad_task_field,
                "task '" + t.task_id + "': model_id present but model_size is 0");
        if (!t.model_id.has_value() && t.model_size != 0)
            add(violation_kind::bad_task_field,
                "task '" + t.task_id + "': model_size set without model_id");
    }

    std::set<std::pair<std::string, std::string>> seen_edges;
    for (const auto& [from, to] : dag.edges) {
        if (ids.count(from) == 0)
            add(violation_kind::dangling_edge, "edge references unknown task '" + from + "'");
        if (ids.count(to) == 0)
            add(violation_kind::dangling_edge, "edge references unknown task '" + to + "'");
        if (from == to)
            add(violation_kind::self_edge, "self edge on task '" + from + "'");
        if (!seen_edges.insert({from, to}).second)
            add(violation_kind::duplicate_edge, "duplicate edge " + from + " -> " + to);
    }

    // Kahn peeling over unique non-self edges; leftover nodes sit on a cycle.
    std::set<std::pair<std::string, std::string>> unique_edges;
    for (const auto& [from, to] : dag.edges)
        if (from != to && ids.count(from) != 0 && ids.count(to) != 0)
            unique_edges.insert({from, to});
    std::map<std::string, int> indegree;
    for (const auto& t : dag.tasks) indegree[t.task_id] = 0;
    for (const auto& [from, to] : unique_edges) ++indegree[to];
    std::deque<std::string> ready;
    for (const auto& [id, deg] : indegree)
        if (deg == 0) ready.push_back(id);
    std::size_t peeled = 0;
    while (!ready.empty()) {
        std::string id = ready.front();
        ready.pop_front();
        ++peeled;
        for (const auto& [from, to] : unique_edges) {
            if (from != id) continue;
            if (--indegree[to] == 0) ready.push_back(to);
        }
    }
    if (peeled != dag.tasks.size())
        add(violation_kind::cycle, "cycle detected among tasks of '" + dag.app_id + "'");

    return res;
}

/// A DAG split into stages: stage_of[t] is the edge count of the longest
/// path from any start node to t, so edges only cross into strictly later
/// stages and all tasks within one stage are mutually independent.
struct staged_dag {
    application_dag dag;
    std::map<std::string, int> stage_of;
    std::vector<std::vector<std::string>> stages; // task ids, sorted within a stage

    int stage_count() const { return static_cast<int>(stages.size()); }
};

/// Longest-path stage assignment via DP over a topological order.
/// Throws on invalid input (validate_dag must pass first).
inline staged_dag assign_stages(const application_dag& dag) {
    auto valid = validate_dag(dag);
    if (!valid.ok()) {
        std::ostringstream oss;
        oss << "assign_stages on invalid DAG '" << dag.app_id << "':";
        for (const auto& v : valid.violations) oss << ' ' << v.message << ';';
        throw std::invalid_argument(oss.str());
    }

    std::map<std::string, int> indegree;
    std::map<std::string, std::vector<std::string>> succ;
    for (const auto& t : dag.tasks) indegree[t.task_id] = 0;
    for (const auto& [from, to] : dag.edges) {
        succ[from].push_back(to);
        ++indegree[to];
    }

    staged_dag out;
    out.dag = dag;

    std::deque<std::string> ready;
    for (const auto& [id, deg] : indegree)
        if (deg == 0) {
            ready.push_back(id);
            out.stage_of[id] = 0;
        }

    int max_stage = 0;
    while (!ready.empty()) {
        std::string id = ready.front();
        ready.pop_front();
        int s = out.stage_of[id];
        max_stage = std::max(max_stage, s);
        for (const auto& nxt : succ[id]) {
            auto it = out.stage_of.find(nxt);
            int candidate = s + 1;
            if (it == out.stage_of.end())
                out.stage_of[nxt] = candidate;
            else
                it->second = std::max(it->second, candidate);
            if (--indegree[nxt] == 0) ready.push_back(nxt);
        }
    }

    out.stages.assign(static_cast<std::size_t>(max_stage) + 1, {});
    for (const auto& [id, s] : out.stage_of)
        out.stages[static_cast<std::size_t>(s)].push_back(id);
    for (auto& stage : out.stages) std::sort(stage.begin(), stage.end());
    return out;
}

} // namespace mtec
