#include "idt/experiments.hpp"

#include "idt/log.hpp"
#include "idt/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

namespace idt {

namespace {

double parse_density(const std::string& text, const std::string& whole) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw ConfigError("noise spec '" + whole + "': bad density '" + text + "'");
    }
    return v;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Matrix to_column(const std::vector<double>& v, std::size_t begin, std::size_t len) {
    Matrix m(len, 1);
    for (std::size_t i = 0; i < len; ++i) {
        m[i] = v[begin + i];
    }
    return m;
}

// Estimated schedules with explicit values on top; estimation is skipped when
// the overrides already pin all four schedule parameters.
SolverConfig configure(const Matrix& y, NoiseKind kind, const DctPlan& plan, const EstimateOptions& est,
                       const ParamOverrides& overrides, bool force_estimate) {
    SolverConfig cfg;
    cfg.max_iters = est.max_iters;
    cfg.enable_filter = true;
    if (force_estimate || !overrides.complete()) {
        cfg = estimate_params_detailed(y, kind, plan, est).config;
    }
    overrides.apply(cfg);
    return cfg;
}

} // namespace

NoiseSpec parse_noise_spec(const std::string& text, std::uint64_t seed) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) {
        parts.push_back(item);
    }
    if (parts.size() < 2) {
        throw ConfigError("noise spec '" + text + "': expected <kind>:<density>");
    }
    NoiseSpec spec;
    spec.seed = seed;
    const std::string& kind = parts[0];
    if (kind == "mixed") {
        if (parts.size() != 3) {
            throw ConfigError("noise spec '" + text + "': mixed needs <spn>:<rvin>");
        }
        spec.kind = NoiseKind::Mixed;
        spec.spn_density = parse_density(parts[1], text);
        spec.rvin_density = parse_density(parts[2], text);
    } else {
        if (parts.size() != 2) {
            throw ConfigError("noise spec '" + text + "': too many fields");
        }
        if (kind == "spn") {
            spec.kind = NoiseKind::SPN;
        } else if (kind == "rvin") {
            spec.kind = NoiseKind::RVIN;
        } else if (kind == "missing") {
            spec.kind = NoiseKind::Missing;
        } else {
            throw ConfigError("noise spec '" + text + "': unknown kind '" + kind + "'");
        }
        spec.density = parse_density(parts[1], text);
    }
    spec.validate();
    return spec;
}

void ParamOverrides::apply(SolverConfig& cfg) const {
    if (alpha1) cfg.alpha1 = *alpha1;
    if (beta1) cfg.beta1 = *beta1;
    if (alpha2) cfg.alpha2 = *alpha2;
    if (beta2) cfg.beta2 = *beta2;
    if (sigma) cfg.sigma = *sigma;
    if (delta) cfg.stop_delta = *delta;
    if (iters) cfg.max_iters = *iters;
}

// --- images ---------------------------------------------------------------

double image_psnr(const Image& x, const Image& ref, bool quantize) {
    if (x.channels.size() != ref.channels.size() || x.channels.empty()) {
        throw DimensionError("image_psnr: channel count mismatch");
    }
    // Pool the squared error over channels so RGB gets a single figure.
    double sq = 0.0;
    std::size_t count = 0;
    for (std::size_t c = 0; c < x.channels.size(); ++c) {
        require_same_shape(x.channels[c], ref.channels[c], "image_psnr");
        for (std::size_t i = 0; i < x.channels[c].size(); ++i) {
            double a = x.channels[c][i];
            double b = ref.channels[c][i];
            if (quantize) {
                a = quantize_pixel(a);
                b = quantize_pixel(b);
            }
            sq += (a - b) * (a - b);
        }
        count += x.channels[c].size();
    }
    const double mse = sq / static_cast<double>(count);
    if (mse == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double image_ssim(const Image& x, const Image& ref) {
    if (x.channels.size() != ref.channels.size() || x.channels.empty()) {
        throw DimensionError("image_ssim: channel count mismatch");
    }
    double total = 0.0;
    for (std::size_t c = 0; c < x.channels.size(); ++c) {
        total += ssim(x.channels[c], ref.channels[c]);
    }
    return total / static_cast<double>(x.channels.size());
}

ImageDenoiseResult denoise_image(const Image& noisy, const ImageDenoiseOptions& opts, const Image* reference) {
    if (noisy.channels.empty() || noisy.channels.front().empty()) {
        throw DimensionError("denoise_image: empty image");
    }
    if (reference && (reference->channels.size() != noisy.channels.size() ||
                      reference->height() != noisy.height() || reference->width() != noisy.width())) {
        throw DimensionError("denoise_image: reference does not match input");
    }
    const auto start = std::chrono::steady_clock::now();
    const DctPlan plan(noisy.height(), noisy.width());

    ImageDenoiseResult out;
    for (std::size_t c = 0; c < noisy.channels.size(); ++c) {
        const Matrix& y = noisy.channels[c];
        SolverConfig cfg = configure(y, opts.kind, plan, opts.estimate, opts.overrides, opts.auto_params);
        cfg.enable_clip = opts.clip;
        cfg.clip_range = ClipRange{0.0, 255.0};
        cfg.enable_filter = opts.filter;

        TraceReference tref;
        if (reference) {
            tref.image = &reference->channels[c];
        }
        RecoveryResult run = modified_idt(y, plan, cfg, tref);
        out.iterations = std::max(out.iterations, run.iterations_used);
        out.restored.channels.push_back(run.x_hat_spatial);
        out.configs.push_back(cfg);
        out.runs.push_back(std::move(run));
    }
    out.wall_time_s = seconds_since(start);

    if (reference) {
        out.psnr = image_psnr(out.restored, *reference, opts.quantized_metrics);
        out.ssim = image_ssim(out.restored, *reference);
        out.noisy_psnr = image_psnr(noisy, *reference, opts.quantized_metrics);
    }
    return out;
}

std::string trace_csv(const std::vector<RecoveryResult>& runs) {
    const bool multi = runs.size() > 1;
    std::string csv = multi ? "channel,k,threshold1,threshold2,residual,psnr\n" : "k,threshold1,threshold2,residual,psnr\n";
    for (std::size_t c = 0; c < runs.size(); ++c) {
        for (const auto& r : runs[c].trace) {
            if (multi) {
                csv += std::to_string(c) + ",";
            }
            csv += std::to_string(r.k) + "," + format_number(r.threshold1) + "," + format_number(r.threshold2) + "," +
                   format_number(r.residual) + "," + (r.psnr ? format_number(*r.psnr) : std::string()) + "\n";
        }
    }
    return csv;
}

// --- audio ----------------------------------------------------------------

double audio_snr(const Audio& x, const Audio& ref) {
    if (x.channels.size() != ref.channels.size() || x.frames() != ref.frames() || x.channels.empty()) {
        throw DimensionError("audio_snr: shape mismatch");
    }
    double sig = 0.0;
    double err = 0.0;
    for (std::size_t c = 0; c < x.channels.size(); ++c) {
        for (std::size_t i = 0; i < x.frames(); ++i) {
            const double d = x.channels[c][i] - ref.channels[c][i];
            sig += ref.channels[c][i] * ref.channels[c][i];
            err += d * d;
        }
    }
    if (sig == 0.0) {
        throw ConfigError("audio_snr: reference is silent");
    }
    if (err == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(sig / err);
}

Audio add_clicks(const Audio& clean, double density, double amplitude, std::uint64_t seed) {
    if (!(density >= 0.0 && density <= 1.0)) {
        throw ConfigError("add_clicks: density must lie in [0, 1]");
    }
    Audio out = clean;
    Rng rng(seed);
    constexpr double top = 32767.0 / 32768.0;
    for (auto& ch : out.channels) {
        for (double& s : ch) {
            const double u = rng.uniform();
            const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
            const double mag = rng.uniform(0.5, 1.0) * amplitude;
            if (u < density) {
                s = std::clamp(s + sign * mag, -1.0, top);
            }
        }
    }
    return out;
}

AudioDenoiseResult denoise_audio(const Audio& noisy, const AudioDenoiseOptions& opts, const Audio* reference) {
    if (opts.frame < 2) {
        throw ConfigError("denoise_audio: frame length must be >= 2");
    }
    if (reference && (reference->channels.size() != noisy.channels.size() || reference->frames() != noisy.frames())) {
        throw DimensionError("denoise_audio: reference does not match input");
    }
    const auto start = std::chrono::steady_clock::now();
    AudioDenoiseResult out;
    out.restored.sample_rate = noisy.sample_rate;

    std::map<std::size_t, std::unique_ptr<DctPlan>> plans;
    for (const auto& ch : noisy.channels) {
        std::vector<double> restored(ch.size(), 0.0);
        for (std::size_t begin = 0; begin < ch.size(); begin += opts.frame) {
            const std::size_t len = std::min(opts.frame, ch.size() - begin);
            const Matrix y = to_column(ch, begin, len);
            if (max_abs(y) == 0.0) {
                continue;
            }
            auto& plan = plans[len];
            if (!plan) {
                plan = std::make_unique<DctPlan>(len, 1);
            }
            SolverConfig cfg = configure(y, opts.kind, *plan, opts.estimate, opts.overrides, opts.auto_params);
            cfg.enable_clip = false;
            cfg.enable_filter = opts.filter;
            const RecoveryResult run = modified_idt(y, *plan, cfg);
            for (std::size_t i = 0; i < len; ++i) {
                restored[begin + i] = run.x_hat_spatial[i];
            }
            ++out.frames_processed;
        }
        out.restored.channels.push_back(std::move(restored));
    }
    out.wall_time_s = seconds_since(start);
    if (reference) {
        out.snr_in = audio_snr(noisy, *reference);
        out.snr_out = audio_snr(out.restored, *reference);
    }
    return out;
}

// --- synthetic sparse separation -----------------------------------------

std::vector<double> synthetic_schedule(const Matrix& y, const DctPlan& plan, int levels, double floor_ratio) {
    if (levels < 2) {
        throw ConfigError("synthetic_schedule: at least two levels required");
    }
    if (!(floor_ratio > 0.0 && floor_ratio < 1.0)) {
        throw ConfigError("synthetic_schedule: floor_ratio must lie in (0, 1)");
    }
    const double top = std::max(max_abs(plan.forward(y)), max_abs(y));
    std::vector<double> schedule;
    for (int i = 0; i < levels; ++i) {
        schedule.push_back(top * std::pow(floor_ratio, static_cast<double>(i) / (levels - 1)));
    }
    return schedule;
}

SolverConfig synthetic_config(const Matrix& y, const DctPlan& plan, int iters, double floor_ratio) {
    if (iters < 1) {
        throw ConfigError("synthetic_config: iters must be >= 1");
    }
    if (!(floor_ratio > 0.0 && floor_ratio < 1.0)) {
        throw ConfigError("synthetic_config: floor_ratio must lie in (0, 1)");
    }
    SolverConfig cfg;
    cfg.max_iters = iters;
    cfg.beta1 = max_abs(plan.forward(y));
    cfg.beta2 = max_abs(y);
    const double rate = -std::log(floor_ratio) / static_cast<double>(iters);
    cfg.alpha1 = rate;
    cfg.alpha2 = rate;
    cfg.stop_delta = 0.0;
    cfg.enable_clip = false;
    cfg.enable_filter = false;
    return cfg;
}

double synth_trial(const SynthOptions& opts, double rho_x, double rho_n, std::uint64_t seed) {
    const SyntheticPair pair = gen_synthetic_pair(opts.size, opts.size, rho_x, rho_n, opts.variance, seed);
    const DctPlan plan(opts.size, opts.size);
    Matrix x_hat(opts.size, opts.size);
    if (max_abs(pair.y) > 0.0) {
        if (opts.solver == SynthSolver::TwoLoop) {
            x_hat = idt::idt(pair.y, plan, synthetic_schedule(pair.y, plan, opts.levels, opts.floor_ratio),
                             opts.inner_delta_ratio * frobenius_norm(pair.y), opts.max_inner_iters)
                        .x_hat;
        } else {
            x_hat = modified_idt(pair.y, plan, synthetic_config(pair.y, plan, opts.levels, opts.floor_ratio)).x_hat;
        }
    }
    if (max_abs(pair.x0) == 0.0) {
        // Nothing to recover: exact silence is a perfect reconstruction.
        return max_abs(x_hat) == 0.0 ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
    }
    return snr(x_hat, pair.x0);
}

std::vector<SynthCell> run_synth(const SynthOptions& opts) {
    if (opts.trials < 1) {
        throw ConfigError("run_synth: trials must be >= 1");
    }
    if (opts.size == 0) {
        throw ConfigError("run_synth: size must be positive");
    }
    std::vector<SynthCell> cells;
    std::uint64_t cell_index = 0;
    for (double rx : opts.rho_x) {
        for (double rn : opts.rho_n) {
            SynthCell cell;
            cell.rho_x = rx;
            cell.rho_n = rn;
            for (int t = 0; t < opts.trials; ++t) {
                const std::uint64_t seed =
                    derive_seed(opts.seed, cell_index * static_cast<std::uint64_t>(opts.trials) + static_cast<std::uint64_t>(t));
                cell.snr_db.push_back(synth_trial(opts, rx, rn, seed));
            }
            double sum = 0.0;
            for (double v : cell.snr_db) {
                sum += v;
            }
            cell.mean_snr_db = sum / static_cast<double>(cell.snr_db.size());
            std::vector<double> sorted = cell.snr_db;
            std::sort(sorted.begin(), sorted.end());
            const std::size_t h = sorted.size() / 2;
            cell.median_snr_db = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
            cell.success_rate = success_rate(cell.snr_db, opts.success_db);
            cells.push_back(std::move(cell));
            ++cell_index;
        }
    }
    return cells;
}

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string synth_csv(const std::vector<SynthCell>& cells) {
    std::string csv = "rho_x,rho_n,mean_snr_db,success_rate\n";
    for (const auto& c : cells) {
        csv += format_number(c.rho_x) + "," + format_number(c.rho_n) + "," + format_number(c.mean_snr_db) + "," +
               format_number(c.success_rate) + "\n";
    }
    return csv;
}

// --- uniqueness analysis ---------------------------------------------------

AnalyzeReport analyze(std::size_t m, std::size_t n) {
    const UniquenessReport u = check_uniqueness(m, n, 0, 0);
    AnalyzeReport r;
    r.m = m;
    r.n = n;
    r.coherence = u.coherence;
    r.bound = u.bound;
    // max|D_m| * max|D_n|, each factor from the closed form for D (x) D.
    r.closed_form = std::sqrt(dct_infnorm_squared(m) * dct_infnorm_squared(n));
    return r;
}

PlantedCheck planted_brute_force(std::size_t m, int k1, int k2, std::uint64_t seed) {
    if (k1 < 0 || k2 < 0 || static_cast<std::size_t>(k1) > m || static_cast<std::size_t>(k2) > m) {
        throw ConfigError("planted_brute_force: sparsity levels out of range");
    }
    Rng rng(seed);
    const auto pick = [&](int k) {
        std::vector<std::size_t> idx(m);
        for (std::size_t i = 0; i < m; ++i) {
            idx[i] = i;
        }
        for (int i = 0; i < k; ++i) {
            const auto j = static_cast<std::size_t>(i) + rng.below(m - static_cast<std::size_t>(i));
            std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
        }
        idx.resize(static_cast<std::size_t>(k));
        std::sort(idx.begin(), idx.end());
        return idx;
    };
    PlantedCheck out;
    out.planted = {pick(k1), pick(k2), Matrix(m, 1), Matrix(m, 1)};
    for (std::size_t s : out.planted.support_x) {
        out.planted.x[s] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(1.0, 2.0);
    }
    for (std::size_t s : out.planted.support_n) {
        out.planted.n[s] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(1.0, 2.0);
    }
    const DctPlan plan(m, 1);
    const Matrix y = plan.inverse(out.planted.x) + out.planted.n;
    const int k_max = std::min<int>(3, static_cast<int>(m));
    out.solutions = brute_force_sparsest(y, plan, std::max({k1, k2, std::min(k_max, 1)}));
    for (const auto& s : out.solutions) {
        if (s.support_x == out.planted.support_x && s.support_n == out.planted.support_n &&
            max_abs_diff(s.x, out.planted.x) < 1e-8 && max_abs_diff(s.n, out.planted.n) < 1e-8) {
            out.planted_found = true;
        }
    }
    out.unique = out.solutions.size() == 1 && out.planted_found;
    return out;
}

} // namespace idt
