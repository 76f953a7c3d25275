#include "idt/solver.hpp"

#include "idt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace idt {

void SolverConfig::validate() const {
    if (max_iters < 1) {
        throw ConfigError("SolverConfig: max_iters must be >= 1");
    }
    const auto nonneg = [](double v, const char* name) {
        if (!(v >= 0.0)) {
            throw ConfigError(std::string("SolverConfig: ") + name + " must be nonnegative");
        }
    };
    nonneg(alpha1, "alpha1");
    nonneg(beta1, "beta1");
    nonneg(alpha2, "alpha2");
    nonneg(beta2, "beta2");
    nonneg(sigma, "sigma");
    if (stop_delta) {
        nonneg(*stop_delta, "stop_delta");
    }
    if (inner_delta && !(*inner_delta > 0.0)) {
        throw ConfigError("SolverConfig: inner_delta must be positive");
    }
    if (enable_clip) {
        if (!clip_range) {
            throw ConfigError("SolverConfig: clipping enabled without a clip range");
        }
        if (!(clip_range->lo < clip_range->hi)) {
            throw ConfigError("SolverConfig: clip range requires lo < hi");
        }
    }
    if (enable_filter && !(sigma > 0.0)) {
        throw ConfigError("SolverConfig: filtering enabled with non-positive sigma");
    }
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0) || (i > 0 && !(schedule[i] < schedule[i - 1]))) {
            throw ConfigError("SolverConfig: schedule must be positive and strictly decreasing");
        }
    }
    if (max_inner_iters < 1) {
        throw ConfigError("SolverConfig: max_inner_iters must be >= 1");
    }
}

Matrix hard_threshold(const Matrix& m, double th) {
    if (!(th >= 0.0)) {
        throw ConfigError("hard_threshold: threshold must be nonnegative");
    }
    Matrix out = m;
    for (double& v : out.values()) {
        if (!(std::abs(v) >= th)) {
            v = 0.0;
        }
    }
    return out;
}

SparsePair project_onto_w(const Matrix& x, const Matrix& n, const Matrix& y, const DctPlan& plan) {
    require_same_shape(x, y, "project_onto_w(x, y)");
    require_same_shape(n, y, "project_onto_w(n, y)");
    SparsePair out{plan.forward(y - n), y + n - plan.inverse(x)};
    out.x += x;
    out.x *= 0.5;
    out.n *= 0.5;
    return out;
}

double feasibility_gap(const SparsePair& pair, const Matrix& y, const DctPlan& plan) {
    Matrix r = plan.inverse(pair.x);
    r += pair.n;
    r -= y;
    return frobenius_norm(r);
}

std::vector<double> default_idt_schedule(const Matrix& y, const DctPlan& plan) {
    constexpr int levels = 40;
    const double top = max_abs(plan.forward(y));
    if (top == 0.0) {
        return {1.0};
    }
    const double ratio = std::pow(1e-3, 1.0 / (levels - 1));
    std::vector<double> th(levels);
    th[0] = top;
    for (int i = 1; i < levels; ++i) {
        th[static_cast<std::size_t>(i)] = th[static_cast<std::size_t>(i - 1)] * ratio;
    }
    return th;
}

RecoveryResult idt(const Matrix& y, const DctPlan& plan, const std::vector<double>& schedule, double inner_delta,
                   int max_inner_iters) {
    SolverConfig check;
    check.schedule = schedule;
    check.inner_delta = inner_delta;
    check.max_inner_iters = max_inner_iters;
    check.validate();
    if (schedule.empty()) {
        throw ConfigError("idt: empty threshold schedule");
    }

    RecoveryResult result;
    Matrix x = plan.forward(y);
    Matrix n(y.rows(), y.cols());
    int k = 0;
    for (double th : schedule) {
        double e = std::numeric_limits<double>::infinity();
        for (int l = 0; l < max_inner_iters && e > inner_delta; ++l) {
            auto projected = project_onto_w(hard_threshold(x, th), hard_threshold(n, th), y, plan);
            e = frobenius_norm(projected.n - n);
            x = std::move(projected.x);
            n = std::move(projected.n);
        }
        result.trace.push_back({k, th, th, e, std::nullopt});
        ++k;
    }
    result.iterations_used = k;
    result.x_hat_spatial = plan.inverse(x);
    result.x_hat = std::move(x);
    result.n_hat = std::move(n);
    return result;
}

RecoveryResult idt(const Matrix& y, const DctPlan& plan, const SolverConfig& config) {
    config.validate();
    const auto schedule = config.schedule.empty() ? default_idt_schedule(y, plan) : config.schedule;
    const double inner = config.inner_delta.value_or(1e-3 * frobenius_norm(y));
    // An all-zero observation has zero default tolerance; any positive level
    // terminates after the first sweep.
    return idt(y, plan, schedule, inner > 0.0 ? inner : 1.0, config.max_inner_iters);
}

RecoveryResult modified_idt(const Matrix& y, const DctPlan& plan, const SolverConfig& config,
                            TraceReference reference) {
    config.validate();
    if (reference.image != nullptr) {
        require_same_shape(*reference.image, y, "modified_idt(reference)");
    }
    const double delta = config.stop_delta.value_or(1e-4 * frobenius_norm(y));

    RecoveryResult result;
    Matrix x = plan.forward(y);
    Matrix n(y.rows(), y.cols());
    int k = 0;
    while (k < config.max_iters) {
        const double kd = static_cast<double>(k);
        const double th1 = config.beta1 * std::exp(-config.alpha1 * kd);
        const double th2 = config.beta2 * std::exp(-config.alpha2 * kd);

        Matrix spatial = plan.inverse(hard_threshold(x, th1));
        if (config.enable_clip) {
            spatial = clip(spatial, config.clip_range->lo, config.clip_range->hi);
        }
        if (config.enable_filter) {
            spatial = gaussian_filter(spatial, config.sigma);
        }

        Matrix next_n = hard_threshold(y - spatial, th2);
        x = plan.forward(y - next_n);
        const double e = frobenius_norm(next_n - n);
        const bool detected = count_nonzero(next_n) > 0 || count_nonzero(n) > 0;
        n = std::move(next_n);

        IterationRecord rec{k, th1, th2, e, std::nullopt};
        if (reference.image != nullptr) {
            rec.psnr = psnr(spatial, *reference.image, reference.peak);
        }
        result.trace.push_back(rec);
        ++k;
        if (detected && e <= delta) {
            break;
        }
    }
    result.iterations_used = k;
    result.x_hat_spatial = plan.inverse(x);
    result.x_hat = std::move(x);
    result.n_hat = std::move(n);
    return result;
}

Matrix clip(const Matrix& m, double lo, double hi) {
    if (!(lo < hi)) {
        throw ConfigError("clip: requires lo < hi");
    }
    Matrix out = m;
    for (double& v : out.values()) {
        v = std::clamp(v, lo, hi);
    }
    return out;
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ConfigError("gaussian_kernel: sigma must be positive");
    }
    const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
    std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (std::ptrdiff_t t = -radius; t <= radius; ++t) {
        const double td = static_cast<double>(t);
        const double w = std::exp(-td * td / (2.0 * sigma * sigma));
        taps[static_cast<std::size_t>(t + radius)] = w;
        sum += w;
    }
    for (double& w : taps) {
        w /= sum;
    }
    return taps;
}

namespace {

// Convolves each line of length `len` (elements `stride` apart, lines
// `line_step` apart) with replicate boundary handling.
void convolve_lines(const Matrix& in, Matrix& out, const std::vector<double>& taps, std::size_t lines,
                    std::size_t len, std::size_t stride, std::size_t line_step) {
    const auto radius = static_cast<std::ptrdiff_t>(taps.size() / 2);
    const auto last = static_cast<std::ptrdiff_t>(len) - 1;
    for (std::size_t l = 0; l < lines; ++l) {
        const std::size_t base = l * line_step;
        for (std::ptrdiff_t i = 0; i <= last; ++i) {
            double acc = 0.0;
            for (std::ptrdiff_t t = -radius; t <= radius; ++t) {
                const std::ptrdiff_t src = std::clamp<std::ptrdiff_t>(i + t, 0, last);
                acc += taps[static_cast<std::size_t>(t + radius)] * in[base + static_cast<std::size_t>(src) * stride];
            }
            out[base + static_cast<std::size_t>(i) * stride] = acc;
        }
    }
}

} // namespace

Matrix gaussian_filter(const Matrix& m, double sigma) {
    const auto taps = gaussian_kernel(sigma);
    if (m.empty()) {
        return m;
    }
    Matrix tmp(m.rows(), m.cols());
    Matrix out(m.rows(), m.cols());
    if (m.rows() == 1 || m.cols() == 1) {
        convolve_lines(m, out, taps, 1, m.size(), 1, 0);
        return out;
    }
    // rows, then columns
    convolve_lines(m, tmp, taps, m.rows(), m.cols(), 1, m.cols());
    convolve_lines(tmp, out, taps, m.cols(), m.rows(), m.cols(), 1);
    return out;
}

double cost_f_lambda(const Matrix& x, const Matrix& n, const Matrix& t1, const Matrix& t2, double lambda) {
    require_same_shape(x, n, "cost_f_lambda(x, n)");
    require_same_shape(x, t1, "cost_f_lambda(x, t1)");
    require_same_shape(n, t2, "cost_f_lambda(n, t2)");
    const auto binary = [](const Matrix& t) {
        return std::all_of(t.values().begin(), t.values().end(), [](double v) { return v == 0.0 || v == 1.0; });
    };
    if (!binary(t1) || !binary(t2)) {
        throw ConfigError("cost_f_lambda: support masks must be binary");
    }
    double off_support = 0.0;
    double support_size = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        off_support += (1.0 - t1[k]) * x[k] * x[k] + (1.0 - t2[k]) * n[k] * n[k];
        support_size += t1[k] + t2[k];
    }
    return off_support + lambda * support_size;
}

} // namespace idt
