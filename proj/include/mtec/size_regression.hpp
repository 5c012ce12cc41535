#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "mtec/core.hpp"

namespace mtec {

/// Per-task-type linear predictor of intermediate file sizes (input bytes ->
/// output bytes), refit online from observed executions. Pooled across
/// devices: the size an operation emits is a property of the computation,
/// not of the host.
class size_regression {
public:
    void observe(const std::string& task_type, double input_bytes, double output_bytes) {
        auto& acc = per_type_[task_type];
        acc.n += 1.0;
        acc.sum_x += input_bytes;
        acc.sum_y += output_bytes;
        acc.sum_xx += input_bytes * input_bytes;
        acc.sum_xy += input_bytes * output_bytes;
    }

    size_regression with_observation(const std::string& task_type, double input_bytes,
                                     double output_bytes) const {
        size_regression copy = *this;
        copy.observe(task_type, input_bytes, output_bytes);
        return copy;
    }

    std::int64_t observation_count(const std::string& task_type) const {
        auto it = per_type_.find(task_type);
        return it == per_type_.end() ? 0 : static_cast<std::int64_t>(it->second.n);
    }

    /// Prediction fallback chain: fitted line -> output_size_hint -> input
    /// size. Results are clamped to >= 0.
    double predict(const std::string& task_type, double input_bytes,
                   std::optional<bytes_t> hint = std::nullopt) const {
        auto it = per_type_.find(task_type);
        if (it == per_type_.end() || it->second.n < 1.0) {
            if (hint.has_value()) return static_cast<double>(*hint);
            return input_bytes < 0.0 ? 0.0 : input_bytes;
        }
        auto [slope, intercept] = it->second.line();
        double y = slope * input_bytes + intercept;
        return y < 0.0 ? 0.0 : y;
    }

private:
    struct accumulator {
        double n = 0.0;
        double sum_x = 0.0;
        double sum_y = 0.0;
        double sum_xx = 0.0;
        double sum_xy = 0.0;

        // Least squares; degenerate x-variance collapses to the mean output.
        std::pair<double, double> line() const {
            double denom = n * sum_xx - sum_x * sum_x;
            if (std::abs(denom) < 1e-12 * (sum_xx * n + 1.0))
                return {0.0, sum_y / n};
            double slope = (n * sum_xy - sum_x * sum_y) / denom;
            double intercept = (sum_y - slope * sum_x) / n;
            return {slope, intercept};
        }
    };

    std::map<std::string, accumulator> per_type_;
};

/// Functional form of the online update used by the orchestration loop.
inline size_regression update_size_regression(const size_regression& reg,
                                              const std::string& task_type, double input_bytes,
                                              double output_bytes) {
    return reg.with_observation(task_type, input_bytes, output_bytes);
}

/// Free-function form of the prediction with the documented fallback chain.
inline double predict_output_size(const size_regression& reg, const std::string& task_type,
                                  double input_bytes, std::optional<bytes_t> hint = std::nullopt) {
    return reg.predict(task_type, input_bytes, hint);
}

} // namespace mtec
