#pragma once

#include "idt/matrix.hpp"

#include <span>

namespace idt {

/// Peak signal-to-noise ratio in dB; +infinity when the inputs are equal.
/// With `quantize`, both inputs are rounded to integers and clamped to
/// [0, peak] first.
[[nodiscard]] double psnr(const Matrix& x, const Matrix& ref, double peak = 255.0, bool quantize = false);

struct SsimOptions {
    std::size_t window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 255.0;
};

/// Mean structural similarity over all fully contained Gaussian windows.
[[nodiscard]] double ssim(const Matrix& x, const Matrix& ref, const SsimOptions& opts = {});

/// 10 log10(||ref||^2 / ||x - ref||^2); +infinity on exact match.
[[nodiscard]] double snr(const Matrix& x, const Matrix& ref);

/// Fraction of entries strictly above `threshold_db`.
[[nodiscard]] double success_rate(std::span<const double> snrs_db, double threshold_db = 60.0);

} // namespace idt
