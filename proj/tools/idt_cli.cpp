// Command-line front end: image/audio restoration, noise injection, the
// synthetic separation sweep, uniqueness analysis and baseline filters.

#include "idt/baselines.hpp"
#include "idt/experiments.hpp"
#include "idt/log.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

namespace {

using json = nlohmann::ordered_json;

json number(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return idt::format_number(v);
}

json number(const std::optional<double>& v) {
    return v ? number(*v) : json(nullptr);
}

idt::NoiseKind parse_kind(const std::string& s) {
    if (s == "spn") return idt::NoiseKind::SPN;
    if (s == "rvin") return idt::NoiseKind::RVIN;
    if (s == "mixed") return idt::NoiseKind::Mixed;
    if (s == "missing") return idt::NoiseKind::Missing;
    throw idt::ConfigError("unknown noise kind '" + s + "'");
}

struct SolverFlags {
    idt::ParamOverrides overrides;
    bool auto_params = false;
    bool alpha_literal = false;
    std::optional<double> floor1, floor2;
    std::string kind;

    void attach(CLI::App& app) {
        app.add_flag("--auto-params", auto_params, "Estimate schedules even when all four are given");
        app.add_option("--alpha1", overrides.alpha1, "Coefficient threshold decay rate");
        app.add_option("--beta1", overrides.beta1, "Initial coefficient threshold");
        app.add_option("--alpha2", overrides.alpha2, "Noise threshold decay rate");
        app.add_option("--beta2", overrides.beta2, "Initial noise threshold");
        app.add_option("--sigma", overrides.sigma, "Gaussian filter width");
        app.add_option("--iters", overrides.iters, "Iteration count K")->check(CLI::PositiveNumber);
        app.add_option("--delta", overrides.delta, "Residual stop level");
        app.add_flag("--alpha-literal", alpha_literal, "Use the mean sorted gap itself as the decay rate");
        app.add_option("--floor1", floor1, "Final coefficient threshold for estimated schedules")
            ->check(CLI::PositiveNumber);
        app.add_option("--floor2", floor2, "Final noise threshold for estimated schedules")->check(CLI::PositiveNumber);
        app.add_option("--kind", kind, "Noise model for parameter estimation (spn|rvin|mixed|missing)");
    }

    idt::EstimateOptions estimate() const {
        idt::EstimateOptions e;
        if (overrides.iters) {
            e.max_iters = *overrides.iters;
        }
        e.alpha_literal = alpha_literal;
        e.floor1 = floor1;
        e.floor2 = floor2;
        return e;
    }
};

json config_json(const idt::SolverConfig& c) {
    return {{"alpha1", number(c.alpha1)}, {"beta1", number(c.beta1)}, {"alpha2", number(c.alpha2)},
            {"beta2", number(c.beta2)},   {"sigma", c.sigma},         {"max_iters", c.max_iters},
            {"clip", c.enable_clip},      {"filter", c.enable_filter}};
}

void write_json(const std::string& path, const json& j) {
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        idt::write_text(path, j.dump(2) + "\n");
    }
}

idt::Image inject(const idt::Image& clean, const idt::NoiseSpec& spec) {
    idt::Image noisy;
    for (std::size_t c = 0; c < clean.channels.size(); ++c) {
        idt::NoiseSpec s = spec;
        s.seed = idt::derive_seed(spec.seed, c);
        noisy.channels.push_back(idt::add_noise(clean.channels[c], s).y);
    }
    return noisy;
}

idt::Image load(const std::string& path, bool gray) {
    idt::Image img = idt::read_image(path);
    return gray ? idt::to_gray(img) : img;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse signal / sparse impulsive noise separation"};
    app.require_subcommand(1);
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "Master seed")->capture_default_str();

    // denoise-image
    auto* di = app.add_subcommand("denoise-image", "Restore an impulse-corrupted image");
    std::string di_in, di_out, di_ref, di_noise, di_trace, di_report, di_noisy_out;
    bool di_no_clip = false, di_no_filter = false, di_gray = false, di_quant = false;
    SolverFlags di_flags;
    di->add_option("input", di_in, "Noisy image, or the clean image with --noise")->required()->check(CLI::ExistingFile);
    di->add_option("-o,--output", di_out, "Restored image (.png or .pgm/.ppm)")->required();
    di->add_option("--reference", di_ref, "Clean image for metrics")->check(CLI::ExistingFile);
    di->add_option("--noise", di_noise, "Corrupt the input first: {spn|rvin|mixed|missing}:<d>[:<d2>]");
    di->add_option("--noisy-output", di_noisy_out, "Where to save the injected noisy image");
    di->add_option("--trace", di_trace, "Per-iteration CSV");
    di->add_option("--report", di_report, "JSON metrics report (stdout when omitted)");
    di->add_flag("--no-clip", di_no_clip, "Disable clipping to [0, 255]");
    di->add_flag("--no-filter", di_no_filter, "Disable Gaussian smoothing");
    di->add_flag("--gray", di_gray, "Convert RGB input to BT.601 luma");
    di->add_flag("--quantized-metrics", di_quant, "PSNR on 8-bit rounded images");
    di_flags.attach(*di);
    di->add_option("--seed", seed, "Master seed");

    // denoise-audio
    auto* da = app.add_subcommand("denoise-audio", "Remove clicks from a PCM16 WAV file");
    std::string da_in, da_out, da_ref, da_report;
    std::size_t da_frame = 4096;
    bool da_filter = false;
    std::optional<double> da_clicks;
    double da_amp = 0.5;
    SolverFlags da_flags;
    da->add_option("input", da_in, "Noisy WAV, or the clean WAV with --clicks")->required()->check(CLI::ExistingFile);
    da->add_option("-o,--output", da_out, "Restored WAV")->required();
    da->add_option("--reference", da_ref, "Clean WAV for SNR")->check(CLI::ExistingFile);
    da->add_option("--frame", da_frame, "Frame length in samples")->capture_default_str();
    da->add_flag("--filter", da_filter, "Enable Gaussian smoothing");
    da->add_option("--clicks", da_clicks, "Inject clicks at this density first");
    da->add_option("--click-amplitude", da_amp, "Peak click amplitude")->capture_default_str();
    da->add_option("--report", da_report, "JSON report (stdout when omitted)");
    da_flags.attach(*da);
    da->add_option("--seed", seed, "Master seed");

    // add-noise
    auto* an = app.add_subcommand("add-noise", "Corrupt an image with impulsive noise");
    std::string an_in, an_out, an_noise, an_mask;
    bool an_gray = false;
    an->add_option("input", an_in)->required()->check(CLI::ExistingFile);
    an->add_option("output", an_out)->required();
    an->add_option("--noise", an_noise, "{spn|rvin|mixed|missing}:<d>[:<d2>]")->required();
    an->add_option("--mask", an_mask, "Write corrupted positions as a 0/255 image");
    an->add_flag("--gray", an_gray, "Convert RGB input to BT.601 luma");
    an->add_option("--seed", seed, "Master seed");

    // synth
    auto* sy = app.add_subcommand("synth", "Sparse-plus-sparse separation sweep");
    idt::SynthOptions so;
    std::string sy_out;
    sy->add_option("--size", so.size, "Grid side")->capture_default_str();
    sy->add_option("--rho-x", so.rho_x, "Coefficient sparsity ratios")->delimiter(',');
    sy->add_option("--rho-n", so.rho_n, "Noise sparsity ratios")->delimiter(',');
    sy->add_option("--trials", so.trials, "Trials per cell")->capture_default_str()->check(CLI::PositiveNumber);
    sy->add_option("--variance", so.variance, "Variance of the nonzero entries")->capture_default_str();
    std::string sy_solver = "two-loop";
    sy->add_option("--solver", sy_solver, "two-loop or modified")
        ->check(CLI::IsMember({"two-loop", "modified"}))
        ->capture_default_str();
    sy->add_option("--levels", so.levels, "Threshold levels (two-loop) or iterations (modified)")
        ->capture_default_str();
    sy->add_option("--inner-delta", so.inner_delta_ratio, "Inner stop level relative to ||Y||")->capture_default_str();
    sy->add_option("--max-inner", so.max_inner_iters, "Inner sweeps per level")->capture_default_str();
    sy->add_option("--floor-ratio", so.floor_ratio, "Final threshold / initial threshold")->capture_default_str();
    sy->add_option("-o,--output", sy_out, "CSV path (stdout when omitted)");
    sy->add_option("--seed", seed, "Master seed");

    // analyze
    auto* az = app.add_subcommand("analyze", "Coherence and uniqueness bound for the DCT model");
    std::size_t az_m = 8, az_n = 1;
    bool az_brute = false;
    int az_k1 = 1, az_k2 = 0;
    std::string az_report;
    az->add_option("-m,--rows", az_m, "Rows")->capture_default_str()->check(CLI::PositiveNumber);
    az->add_option("-n,--cols", az_n, "Columns (1 for 1-D)")->capture_default_str()->check(CLI::PositiveNumber);
    az->add_flag("--brute-force", az_brute, "Plant an instance and search all supports (1-D, length <= 12)");
    az->add_option("--k1", az_k1, "Planted coefficient count")->capture_default_str();
    az->add_option("--k2", az_k2, "Planted spike count")->capture_default_str();
    az->add_option("--report", az_report, "JSON report (stdout when omitted)");
    az->add_option("--seed", seed, "Master seed");

    // baseline
    auto* bl = app.add_subcommand("baseline", "Run AMF or ACWMF alone");
    std::string bl_in, bl_out, bl_method = "amf", bl_noise, bl_ref, bl_report;
    int bl_window = 19;
    bool bl_gray = false;
    bl->add_option("input", bl_in)->required()->check(CLI::ExistingFile);
    bl->add_option("-o,--output", bl_out)->required();
    bl->add_option("--method", bl_method, "amf or acwmf")->check(CLI::IsMember({"amf", "acwmf"}))->capture_default_str();
    bl->add_option("--max-window", bl_window, "AMF maximum window")->capture_default_str();
    bl->add_option("--noise", bl_noise, "Corrupt the input first");
    bl->add_option("--reference", bl_ref, "Clean image for metrics")->check(CLI::ExistingFile);
    bl->add_option("--report", bl_report, "JSON report (stdout when omitted)");
    bl->add_flag("--gray", bl_gray, "Convert RGB input to BT.601 luma");
    bl->add_option("--seed", seed, "Master seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*di) {
            const idt::Image input = load(di_in, di_gray);
            std::optional<idt::Image> reference;
            idt::Image noisy = input;
            idt::NoiseKind kind = idt::NoiseKind::SPN;
            if (!di_noise.empty()) {
                const idt::NoiseSpec spec = idt::parse_noise_spec(di_noise, seed);
                kind = spec.kind;
                reference = input;
                noisy = inject(input, spec);
                if (!di_noisy_out.empty()) {
                    idt::write_image(di_noisy_out, idt::quantized(noisy));
                }
            }
            if (!di_ref.empty()) {
                reference = load(di_ref, di_gray);
            }
            if (!di_flags.kind.empty()) {
                kind = parse_kind(di_flags.kind);
            }
            idt::ImageDenoiseOptions opts;
            opts.kind = kind;
            opts.auto_params = di_flags.auto_params;
            opts.estimate = di_flags.estimate();
            opts.overrides = di_flags.overrides;
            opts.clip = !di_no_clip;
            opts.filter = !di_no_filter;
            opts.quantized_metrics = di_quant;
            const auto res = idt::denoise_image(noisy, opts, reference ? &*reference : nullptr);
            idt::write_image(di_out, idt::quantized(res.restored));
            if (!di_trace.empty()) {
                idt::write_text(di_trace, idt::trace_csv(res.runs));
            }
            json cfgs = json::array();
            for (const auto& c : res.configs) {
                cfgs.push_back(config_json(c));
            }
            write_json(di_report, {{"psnr", number(res.psnr)},
                                   {"ssim", number(res.ssim)},
                                   {"iterations", res.iterations},
                                   {"wall_time_s", res.wall_time_s},
                                   {"noisy_psnr", number(res.noisy_psnr)},
                                   {"channels", cfgs}});
        } else if (*da) {
            const idt::Audio input = idt::read_wav(da_in);
            std::optional<idt::Audio> reference;
            idt::Audio noisy = input;
            if (da_clicks) {
                reference = input;
                noisy = idt::add_clicks(input, *da_clicks, da_amp, seed);
            }
            if (!da_ref.empty()) {
                reference = idt::read_wav(da_ref);
            }
            idt::AudioDenoiseOptions opts;
            opts.frame = da_frame;
            opts.filter = da_filter;
            opts.auto_params = da_flags.auto_params;
            opts.estimate = da_flags.estimate();
            opts.overrides = da_flags.overrides;
            if (!da_flags.kind.empty()) {
                opts.kind = parse_kind(da_flags.kind);
            }
            const auto res = idt::denoise_audio(noisy, opts, reference ? &*reference : nullptr);
            idt::write_wav(da_out, res.restored);
            write_json(da_report, {{"snr_in", number(res.snr_in)},
                                   {"snr_out", number(res.snr_out)},
                                   {"frames", res.frames_processed},
                                   {"wall_time_s", res.wall_time_s}});
        } else if (*an) {
            const idt::Image clean = load(an_in, an_gray);
            const idt::NoiseSpec spec = idt::parse_noise_spec(an_noise, seed);
            idt::Image noisy;
            idt::Image mask;
            for (std::size_t c = 0; c < clean.channels.size(); ++c) {
                idt::NoiseSpec s = spec;
                s.seed = idt::derive_seed(spec.seed, c);
                const auto inst = idt::add_noise(clean.channels[c], s);
                noisy.channels.push_back(inst.y);
                mask.channels.push_back(inst.mask * 255.0);
            }
            idt::write_image(an_out, idt::quantized(noisy));
            if (!an_mask.empty()) {
                idt::write_image(an_mask, idt::quantized(mask));
            }
        } else if (*sy) {
            so.seed = seed;
            so.solver = sy_solver == "modified" ? idt::SynthSolver::Modified : idt::SynthSolver::TwoLoop;
            const std::string csv = idt::synth_csv(idt::run_synth(so));
            if (sy_out.empty()) {
                std::cout << csv;
            } else {
                idt::write_text(sy_out, csv);
            }
        } else if (*az) {
            const idt::AnalyzeReport r = idt::analyze(az_m, az_n);
            json j = {{"m", r.m},
                      {"n", r.n},
                      {"coherence", number(r.coherence)},
                      {"bound", number(r.bound)},
                      {"closed_form_coherence", number(r.closed_form)}};
            if (az_brute) {
                if (az_n != 1) {
                    throw idt::ConfigError("analyze: --brute-force needs a 1-D model (-n 1)");
                }
                const auto check = idt::planted_brute_force(az_m, az_k1, az_k2, seed);
                const auto u = idt::check_uniqueness(az_m, az_n, az_k1, az_k2);
                j["brute_force"] = {{"k1", az_k1},
                                    {"k2", az_k2},
                                    {"below_bound", u.satisfied},
                                    {"solutions", check.solutions.size()},
                                    {"planted_found", check.planted_found},
                                    {"unique", check.unique}};
            }
            write_json(az_report, j);
        } else if (*bl) {
            const idt::Image input = load(bl_in, bl_gray);
            std::optional<idt::Image> reference;
            idt::Image noisy = input;
            if (!bl_noise.empty()) {
                reference = input;
                noisy = inject(input, idt::parse_noise_spec(bl_noise, seed));
            }
            if (!bl_ref.empty()) {
                reference = load(bl_ref, bl_gray);
            }
            idt::Image out;
            for (const auto& ch : noisy.channels) {
                out.channels.push_back(bl_method == "amf" ? idt::amf(ch, bl_window) : idt::acwmf(ch));
            }
            idt::write_image(bl_out, idt::quantized(out));
            json j = {{"method", bl_method}};
            if (reference) {
                j["psnr"] = number(idt::image_psnr(out, *reference));
                j["ssim"] = number(idt::image_ssim(out, *reference));
            }
            write_json(bl_report, j);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
