#pragma once

#include "idt/analysis.hpp"
#include "idt/io.hpp"
#include "idt/noise.hpp"
#include "idt/params.hpp"
#include "idt/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace idt {

/// Parses "spn:0.3", "rvin:0.1", "missing:0.2" or "mixed:<spn>:<rvin>".
[[nodiscard]] NoiseSpec parse_noise_spec(const std::string& text, std::uint64_t seed);

/// Explicit values that replace estimated ones.
struct ParamOverrides {
    std::optional<double> alpha1, beta1, alpha2, beta2, sigma, delta;
    std::optional<int> iters;

    /// All four schedule parameters given, so estimation can be skipped.
    [[nodiscard]] bool complete() const { return alpha1 && beta1 && alpha2 && beta2; }
    void apply(SolverConfig& cfg) const;
};

// --- images ---------------------------------------------------------------

struct ImageDenoiseOptions {
    NoiseKind kind = NoiseKind::SPN;
    /// Estimate the schedules even when every override is given.
    bool auto_params = false;
    EstimateOptions estimate;
    ParamOverrides overrides;
    bool clip = true;
    bool filter = true;
    /// PSNR on images rounded to 8 bits instead of raw doubles.
    bool quantized_metrics = false;
};

struct ImageDenoiseResult {
    Image restored;
    std::vector<SolverConfig> configs;
    std::vector<RecoveryResult> runs;  ///< one per channel
    std::optional<double> psnr;
    std::optional<double> ssim;
    std::optional<double> noisy_psnr;
    int iterations = 0;
    double wall_time_s = 0.0;
};

/// Restores each channel independently with the modified solver; clipping to
/// [0, 255] and Gaussian smoothing are on unless disabled. Metrics are filled
/// when `reference` is given.
[[nodiscard]] ImageDenoiseResult denoise_image(const Image& noisy, const ImageDenoiseOptions& opts,
                                               const Image* reference = nullptr);

[[nodiscard]] double image_psnr(const Image& x, const Image& ref, bool quantize = false);
[[nodiscard]] double image_ssim(const Image& x, const Image& ref);

/// CSV with header k,threshold1,threshold2,residual,psnr (a leading channel
/// column is added for multi-channel runs).
[[nodiscard]] std::string trace_csv(const std::vector<RecoveryResult>& runs);

// --- audio ----------------------------------------------------------------

struct AudioDenoiseOptions {
    std::size_t frame = 4096;
    NoiseKind kind = NoiseKind::SPN;
    bool auto_params = false;
    EstimateOptions estimate;
    ParamOverrides overrides;
    bool filter = false;
};

struct AudioDenoiseResult {
    Audio restored;
    std::optional<double> snr_in;
    std::optional<double> snr_out;
    int frames_processed = 0;
    double wall_time_s = 0.0;
};

/// Frame-wise 1-D restoration over non-overlapping frames (the last frame
/// may be shorter). Clipping is never applied to audio. All-zero frames pass
/// through untouched.
[[nodiscard]] AudioDenoiseResult denoise_audio(const Audio& noisy, const AudioDenoiseOptions& opts,
                                               const Audio* reference = nullptr);

[[nodiscard]] double audio_snr(const Audio& x, const Audio& ref);

/// Adds `density` impulsive clicks of random sign and amplitude in
/// [0.5, 1] * amplitude, clamped to [-1, 1).
[[nodiscard]] Audio add_clicks(const Audio& clean, double density, double amplitude, std::uint64_t seed);

// --- synthetic sparse separation -----------------------------------------

enum class SynthSolver { TwoLoop, Modified };

struct SynthOptions {
    std::size_t size = 128;
    std::vector<double> rho_x{0.1, 0.2, 0.3};
    std::vector<double> rho_n{0.1, 0.2, 0.3};
    int trials = 20;
    std::uint64_t seed = 1;
    double variance = 128.0;
    SynthSolver solver = SynthSolver::TwoLoop;
    /// Threshold levels (two-loop) or iterations (modified).
    int levels = 60;
    /// Final threshold as a fraction of the initial one.
    double floor_ratio = 1e-9;
    /// Two-loop inner stop level as a fraction of ||Y||_F.
    double inner_delta_ratio = 1e-6;
    int max_inner_iters = 50;
    double success_db = 60.0;
};

struct SynthCell {
    double rho_x = 0.0;
    double rho_n = 0.0;
    std::vector<double> snr_db;
    double mean_snr_db = 0.0;
    double median_snr_db = 0.0;
    double success_rate = 0.0;
};

/// Threshold schedule for exactly sparse synthetic data: `levels` geometric
/// steps from the largest magnitude seen in either domain down to
/// floor_ratio of it.
[[nodiscard]] std::vector<double> synthetic_schedule(const Matrix& y, const DctPlan& plan, int levels,
                                                     double floor_ratio);

/// Modified-solver settings for the same data: both thresholds start at their
/// domain's largest magnitude and decay to floor_ratio of it over `iters`
/// iterations; no clipping, no filtering, no early stop.
[[nodiscard]] SolverConfig synthetic_config(const Matrix& y, const DctPlan& plan, int iters, double floor_ratio);

/// One seeded trial: SNR (dB) of the recovered signal against inverse(X0).
[[nodiscard]] double synth_trial(const SynthOptions& opts, double rho_x, double rho_n, std::uint64_t seed);

/// Runs every (rho_x, rho_n) cell; trial t of cell c uses
/// derive_seed(seed, c * trials + t).
[[nodiscard]] std::vector<SynthCell> run_synth(const SynthOptions& opts);

/// CSV with header rho_x,rho_n,mean_snr_db,success_rate.
[[nodiscard]] std::string synth_csv(const std::vector<SynthCell>& cells);

/// Fixed-precision number formatting used by all CSV/JSON outputs; "inf" for
/// +infinity.
[[nodiscard]] std::string format_number(double v);

// --- uniqueness analysis ---------------------------------------------------

struct AnalyzeReport {
    std::size_t m = 0;
    std::size_t n = 0;
    double coherence = 0.0;
    double bound = 0.0;
    double closed_form = 0.0;  ///< closed-form coherence for the DCT model
};

[[nodiscard]] AnalyzeReport analyze(std::size_t m, std::size_t n);

struct PlantedCheck {
    SparseDecomposition planted;
    std::vector<SparseDecomposition> solutions;
    bool planted_found = false;
    bool unique = false;
};

/// Plants k1 DCT coefficients and k2 spikes (values of magnitude in [1, 2],
/// random sign) in a length-m signal and runs the exhaustive search.
[[nodiscard]] PlantedCheck planted_brute_force(std::size_t m, int k1, int k2, std::uint64_t seed);

} // namespace idt
