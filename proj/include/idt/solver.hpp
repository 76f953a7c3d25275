#pragma once

#include "idt/matrix.hpp"
#include "idt/transforms.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace idt {

/// A candidate decomposition: `x` holds transform-domain coefficients and
/// `n` the observation-domain noise. Feasible when inverse(x) + n == y.
struct SparsePair {
    Matrix x;
    Matrix n;
};

struct ClipRange {
    double lo = 0.0;
    double hi = 255.0;
};

/// Parameters of both solver variants.
///
/// The modified solver uses the exponential schedules
/// beta1 * exp(-alpha1 k) for coefficients and beta2 * exp(-alpha2 k) for
/// noise. The two-loop solver uses `schedule` and `inner_delta` instead.
struct SolverConfig {
    double alpha1 = 0.0;
    double beta1 = 0.0;
    double alpha2 = 0.0;
    double beta2 = 0.0;
    double sigma = 0.4;
    int max_iters = 60;
    /// Residual stop level; unset means 1e-4 * ||Y||_F.
    std::optional<double> stop_delta;
    std::optional<ClipRange> clip_range;
    bool enable_clip = false;
    bool enable_filter = false;

    std::vector<double> schedule;
    /// Inner-loop stop level for the two-loop solver; unset means 1e-3 * ||Y||_F.
    std::optional<double> inner_delta;
    /// Safety cap on inner-loop sweeps per threshold level.
    int max_inner_iters = 10000;

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

struct IterationRecord {
    int k = 0;
    double threshold1 = 0.0;
    double threshold2 = 0.0;
    /// ||N^{k+1} - N^k||_F
    double residual = 0.0;
    std::optional<double> psnr;
};

struct RecoveryResult {
    Matrix x_hat;          ///< final transform-domain coefficients
    Matrix x_hat_spatial;  ///< inverse transform of x_hat
    Matrix n_hat;
    int iterations_used = 0;
    std::vector<IterationRecord> trace;
};

/// Optional ground truth for per-iteration PSNR in the trace.
struct TraceReference {
    const Matrix* image = nullptr;
    double peak = 255.0;
};

/// Keeps entries with |value| >= th, zeroes the rest.
[[nodiscard]] Matrix hard_threshold(const Matrix& m, double th);

/// Nearest feasible pair to (x, n) in Frobenius distance. Both halves are
/// computed from the input pair:
///   x' = (x + D(y - n)) / 2,  n' = (y + n - D^{-1}(x)) / 2.
[[nodiscard]] SparsePair project_onto_w(const Matrix& x, const Matrix& n, const Matrix& y,
                                        const DctPlan& plan);

/// ||D^{-1}(x) + n - y||_F
[[nodiscard]] double feasibility_gap(const SparsePair& pair, const Matrix& y, const DctPlan& plan);

/// Two-loop iterative double thresholding. For each level of the strictly
/// decreasing schedule, alternates joint thresholding of (X, N) with
/// projection onto the feasible set until the noise update falls below
/// `inner_delta`, warm-starting each level from the previous one.
[[nodiscard]] RecoveryResult idt(const Matrix& y, const DctPlan& plan, const std::vector<double>& schedule,
                                 double inner_delta, int max_inner_iters = 10000);

/// Same, reading schedule and inner_delta from `config`; an empty schedule
/// selects the default 40 geometric levels from max|D(Y)| down to 1e-3 of it.
[[nodiscard]] RecoveryResult idt(const Matrix& y, const DctPlan& plan, const SolverConfig& config);

[[nodiscard]] std::vector<double> default_idt_schedule(const Matrix& y, const DctPlan& plan);

/// Single-loop solver with exponentially decaying thresholds, optional
/// clipping of the spatial estimate and optional Gaussian smoothing.
///
/// Per iteration k: X <- threshold(X, th1_k); S <- D^{-1}(X), clipped and
/// filtered when enabled; N' <- threshold(Y - S, th2_k); X <- D(Y - N').
/// Stops after max_iters iterations or once ||N' - N||_F <= stop_delta. The
/// residual test is skipped while no noise has been detected yet, so a large
/// initial noise threshold cannot end the run at k = 0.
///
/// Trace PSNR (when `reference` is given) is measured on S, the clipped and
/// filtered spatial estimate of that iteration.
[[nodiscard]] RecoveryResult modified_idt(const Matrix& y, const DctPlan& plan, const SolverConfig& config,
                                          TraceReference reference = {});

/// Entry-wise clamp to [lo, hi]. Requires lo < hi.
[[nodiscard]] Matrix clip(const Matrix& m, double lo, double hi);

/// Normalized Gaussian taps for radius ceil(3 sigma).
[[nodiscard]] std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian smoothing with replicate edges. A single-row or
/// single-column input is smoothed along its length only.
[[nodiscard]] Matrix gaussian_filter(const Matrix& m, double sigma);

/// Surrogate cost
///   ||(1-T1).X||^2 + ||(1-T2).N||^2 + lambda (|T1|_1 + |T2|_1)
/// for binary support masks T1, T2.
[[nodiscard]] double cost_f_lambda(const Matrix& x, const Matrix& n, const Matrix& t1, const Matrix& t2,
                                   double lambda);

} // namespace idt
