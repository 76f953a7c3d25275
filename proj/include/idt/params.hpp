#pragma once

#include "idt/matrix.hpp"
#include "idt/noise.hpp"
#include "idt/solver.hpp"
#include "idt/transforms.hpp"

#include <optional>

namespace idt {

struct EstimateOptions {
    int max_iters = 60;
    /// Use the mean sorted-magnitude gap itself as the decay rate instead of
    /// converting it to a rate with the log-ratio rule.
    bool alpha_literal = false;
    /// Estimated corruption fraction at or above which the wider filter is used.
    double density_cutover = 0.3;
    double sigma_low = 0.4;
    double sigma_high = 0.55;
    int amf_window = 19;
    /// Explicit final thresholds. When set, the schedule runs from beta down to
    /// this level instead of down to the gap scale (alpha_literal is ignored
    /// for that schedule).
    std::optional<double> floor1;
    std::optional<double> floor2;
};

/// Diagnostics reported alongside the estimated configuration.
struct ParamEstimate {
    SolverConfig config;
    double density_estimate = 0.0;
    double gap_signal = 0.0;
    double gap_noise = 0.0;
    bool degenerate = false;
};

/// Coarse-estimate the signal with AMF (SPN, MIXED, MISSING) or ACWMF (RVIN),
/// take the residual as the coarse noise, and derive the threshold schedules:
/// beta1 = max|D(S)|, beta2 = max|E|, and decay rates that carry each
/// threshold from beta down to the mean gap between consecutive sorted
/// magnitudes over max_iters iterations. The returned config has filtering
/// enabled and clipping disabled; image callers turn clipping on.
[[nodiscard]] ParamEstimate estimate_params_detailed(const Matrix& y, NoiseKind kind, const DctPlan& plan,
                                                     const EstimateOptions& opts = {});

[[nodiscard]] SolverConfig estimate_params(const Matrix& y, NoiseKind kind, const DctPlan& plan,
                                           int max_iters = 60);

/// Mean gap between consecutive entries of the sorted magnitudes of `m`.
[[nodiscard]] double mean_sorted_gap(const Matrix& m);

} // namespace idt
