#include "oracles.hpp"

#include "idt/metrics.hpp"
#include "idt/noise.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace idt;

TEST_CASE("psnr") {
    const Matrix ref(8, 8, 0.0);
    CHECK(std::isinf(psnr(ref, ref)));
    CHECK(psnr(Matrix(8, 8, 1.0), ref) == doctest::Approx(10.0 * std::log10(65025.0)));
    CHECK(psnr(Matrix(8, 8, 1.0), ref) == doctest::Approx(48.13).epsilon(1e-4));

    Rng rng(3);
    Matrix a(40, 30), b(40, 30);
    for (auto& v : a.values()) v = rng.uniform(0.0, 255.0);
    for (auto& v : b.values()) v = rng.uniform(0.0, 255.0);
    CHECK(std::abs(psnr(a, b) - 10.0 * std::log10(255.0 * 255.0 / oracle::mse(a, b))) < 1e-10);
    CHECK(psnr(a, b) == doctest::Approx(psnr(-1.0 * a, -1.0 * b)).epsilon(1e-14));
    CHECK(psnr(a, b, 1.0) == doctest::Approx(psnr(a, b) - 20.0 * std::log10(255.0)));

    // Larger error, lower PSNR.
    const Matrix c = b + Matrix(40, 30, 3.0);
    CHECK(psnr(c, b) > psnr(b + Matrix(40, 30, 4.0), b));

    CHECK(psnr(Matrix{{1.4}}, Matrix{{0.4}}, 255.0, true) == doctest::Approx(10.0 * std::log10(65025.0)));
    CHECK_THROWS_AS((void)psnr(a, Matrix(3, 3)), DimensionError);
}

TEST_CASE("snr") {
    Rng rng(4);
    Matrix ref(20, 20), x(20, 20);
    for (auto& v : ref.values()) v = rng.normal();
    for (auto& v : x.values()) v = rng.normal();
    CHECK(std::isinf(snr(ref, ref)));
    CHECK(snr(2.0 * ref, ref) == doctest::Approx(0.0).epsilon(1e-12));
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        num += ref[k] * ref[k];
        den += (x[k] - ref[k]) * (x[k] - ref[k]);
    }
    CHECK(std::abs(snr(x, ref) - 10.0 * std::log10(num / den)) < 1e-10);
    CHECK(snr(-1.0 * x, -1.0 * ref) == doctest::Approx(snr(x, ref)));
    CHECK_THROWS_AS((void)snr(x, Matrix(20, 20)), ConfigError);
}

TEST_CASE("success rate") {
    const std::vector<double> all_inf{INFINITY, INFINITY};
    CHECK(success_rate(all_inf) == 1.0);
    const std::vector<double> pair{59.0, 61.0};
    CHECK(success_rate(pair) == 0.5);
    const std::vector<double> edge{60.0};
    CHECK(success_rate(edge) == 0.0);
    CHECK_THROWS_AS((void)success_rate(std::vector<double>{}), ConfigError);
}

TEST_CASE("ssim") {
    const Matrix tex = gen_test_image(48, 40, 12);
    CHECK(ssim(tex, tex) == doctest::Approx(1.0).epsilon(1e-12));

    Matrix neg = tex;
    for (auto& v : neg.values()) v = 255.0 - v;
    CHECK(ssim(neg, tex) < 0.3);

    Rng rng(6);
    Matrix noisy = tex;
    for (auto& v : noisy.values()) v += 20.0 * rng.normal();
    CHECK(std::abs(ssim(noisy, tex) - ssim(tex, noisy)) < 1e-12);
    CHECK(std::abs(ssim(noisy, tex) - oracle::ssim(noisy, tex)) < 1e-10);
    CHECK(ssim(noisy, tex) < 1.0);

    CHECK_THROWS_AS((void)ssim(Matrix(10, 20), Matrix(10, 20)), DimensionError);
}
