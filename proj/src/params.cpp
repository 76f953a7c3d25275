#include "idt/params.hpp"

#include "idt/baselines.hpp"
#include "idt/log.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace idt {

double mean_sorted_gap(const Matrix& m) {
    if (m.size() < 2) {
        return 0.0;
    }
    // The consecutive gaps of the sorted magnitudes telescope to max - min.
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double v : m.values()) {
        lo = std::min(lo, std::abs(v));
        hi = std::max(hi, std::abs(v));
    }
    return (hi - lo) / static_cast<double>(m.size() - 1);
}

namespace {

double decay_rate(double beta, double gap, int iters, bool literal, std::optional<double> floor) {
    if (beta <= 0.0) {
        return 0.0;
    }
    if (floor) {
        return std::max(0.0, std::log(beta / *floor) / static_cast<double>(iters));
    }
    if (literal) {
        return gap;
    }
    return std::max(0.0, std::log(beta / std::max(gap, 1e-6 * beta)) / static_cast<double>(iters));
}

} // namespace

ParamEstimate estimate_params_detailed(const Matrix& y, NoiseKind kind, const DctPlan& plan,
                                       const EstimateOptions& opts) {
    if (y.empty()) {
        throw DimensionError("estimate_params: empty observation");
    }
    if (opts.max_iters < 1) {
        throw ConfigError("estimate_params: max_iters must be >= 1");
    }
    if ((opts.floor1 && !(*opts.floor1 > 0.0)) || (opts.floor2 && !(*opts.floor2 > 0.0))) {
        throw ConfigError("estimate_params: threshold floors must be positive");
    }

    ParamEstimate est;
    SolverConfig& cfg = est.config;
    cfg.max_iters = opts.max_iters;
    cfg.enable_filter = true;
    cfg.enable_clip = false;

    const Matrix coarse = kind == NoiseKind::RVIN ? acwmf(y) : amf(y, opts.amf_window);
    const Matrix coarse_noise = y - coarse;
    const Matrix coarse_coeffs = plan.forward(coarse);

    cfg.beta1 = max_abs(coarse_coeffs);
    cfg.beta2 = max_abs(coarse_noise);
    est.gap_signal = mean_sorted_gap(coarse_coeffs);
    est.gap_noise = mean_sorted_gap(coarse_noise);
    cfg.alpha1 = decay_rate(cfg.beta1, est.gap_signal, opts.max_iters, opts.alpha_literal, opts.floor1);
    cfg.alpha2 = decay_rate(cfg.beta2, est.gap_noise, opts.max_iters, opts.alpha_literal, opts.floor2);

    const auto corrupted = std::count_if(coarse_noise.values().begin(), coarse_noise.values().end(),
                                         [](double v) { return std::abs(v) > 1e-9; });
    est.density_estimate = static_cast<double>(corrupted) / static_cast<double>(y.size());
    cfg.sigma = est.density_estimate < opts.density_cutover ? opts.sigma_low : opts.sigma_high;

    if (cfg.beta1 == 0.0) {
        est.degenerate = true;
        log_warning("estimate_params: observation is identically zero; using pass-through defaults");
    }
    if (cfg.beta2 == 0.0) {
        // Nothing looks impulsive: disable noise detection instead of letting
        // a zero threshold label every residual as noise.
        cfg.beta2 = std::numeric_limits<double>::infinity();
        cfg.alpha2 = 0.0;
    }
    return est;
}

SolverConfig estimate_params(const Matrix& y, NoiseKind kind, const DctPlan& plan, int max_iters) {
    EstimateOptions opts;
    opts.max_iters = max_iters;
    return estimate_params_detailed(y, kind, plan, opts).config;
}

} // namespace idt
