#include "idt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace idt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double quantized(double v, double peak) { return std::clamp(std::nearbyint(v), 0.0, peak); }

std::vector<double> ssim_window(std::size_t size, double sigma) {
    std::vector<double> w(size);
    const double c = static_cast<double>(size - 1) / 2.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        const double t = static_cast<double>(i) - c;
        w[i] = std::exp(-t * t / (2.0 * sigma * sigma));
        sum += w[i];
    }
    for (double& v : w) {
        v /= sum;
    }
    return w;
}

// Separable "valid" correlation: output is (rows-w+1) x (cols-w+1).
Matrix filter_valid(const Matrix& in, const std::vector<double>& w) {
    const std::size_t ws = w.size();
    const std::size_t orows = in.rows() - ws + 1;
    const std::size_t ocols = in.cols() - ws + 1;
    Matrix tmp(in.rows(), ocols);
    for (std::size_t i = 0; i < in.rows(); ++i) {
        for (std::size_t j = 0; j < ocols; ++j) {
            double acc = 0.0;
            for (std::size_t t = 0; t < ws; ++t) {
                acc += w[t] * in(i, j + t);
            }
            tmp(i, j) = acc;
        }
    }
    Matrix out(orows, ocols);
    for (std::size_t i = 0; i < orows; ++i) {
        for (std::size_t t = 0; t < ws; ++t) {
            const double wt = w[t];
            for (std::size_t j = 0; j < ocols; ++j) {
                out(i, j) += wt * tmp(i + t, j);
            }
        }
    }
    return out;
}

} // namespace

double psnr(const Matrix& x, const Matrix& ref, double peak, bool quantize) {
    require_same_shape(x, ref, "psnr");
    if (x.empty()) {
        throw DimensionError("psnr: empty input");
    }
    double sse = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double a = quantize ? quantized(x[k], peak) : x[k];
        const double b = quantize ? quantized(ref[k], peak) : ref[k];
        sse += (a - b) * (a - b);
    }
    if (sse == 0.0) {
        return kInf;
    }
    const double mse = sse / static_cast<double>(x.size());
    return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const Matrix& x, const Matrix& ref, const SsimOptions& opts) {
    require_same_shape(x, ref, "ssim");
    if (x.rows() < opts.window || x.cols() < opts.window) {
        throw DimensionError("ssim: image smaller than the " + std::to_string(opts.window) + "x" +
                             std::to_string(opts.window) + " window");
    }
    const auto w = ssim_window(opts.window, opts.sigma);
    const double c1 = (opts.k1 * opts.dynamic_range) * (opts.k1 * opts.dynamic_range);
    const double c2 = (opts.k2 * opts.dynamic_range) * (opts.k2 * opts.dynamic_range);

    Matrix xx(x.rows(), x.cols());
    Matrix yy(x.rows(), x.cols());
    Matrix xy(x.rows(), x.cols());
    for (std::size_t k = 0; k < x.size(); ++k) {
        xx[k] = x[k] * x[k];
        yy[k] = ref[k] * ref[k];
        xy[k] = x[k] * ref[k];
    }
    const Matrix mu_x = filter_valid(x, w);
    const Matrix mu_y = filter_valid(ref, w);
    const Matrix e_xx = filter_valid(xx, w);
    const Matrix e_yy = filter_valid(yy, w);
    const Matrix e_xy = filter_valid(xy, w);

    double total = 0.0;
    for (std::size_t k = 0; k < mu_x.size(); ++k) {
        const double mx = mu_x[k];
        const double my = mu_y[k];
        const double vx = e_xx[k] - mx * mx;
        const double vy = e_yy[k] - my * my;
        const double cov = e_xy[k] - mx * my;
        total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
    return total / static_cast<double>(mu_x.size());
}

double snr(const Matrix& x, const Matrix& ref) {
    require_same_shape(x, ref, "snr");
    double signal = 0.0;
    double error = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        signal += ref[k] * ref[k];
        error += (x[k] - ref[k]) * (x[k] - ref[k]);
    }
    if (signal == 0.0) {
        throw ConfigError("snr: reference is all zero");
    }
    if (error == 0.0) {
        return kInf;
    }
    return 10.0 * std::log10(signal / error);
}

double success_rate(std::span<const double> snrs_db, double threshold_db) {
    if (snrs_db.empty()) {
        throw ConfigError("success_rate: no trials");
    }
    const auto hits = std::count_if(snrs_db.begin(), snrs_db.end(), [&](double s) { return s > threshold_db; });
    return static_cast<double>(hits) / static_cast<double>(snrs_db.size());
}

} // namespace idt
