#include "idt/noise.hpp"
#include "idt/transforms.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace idt;

namespace {

double mask_fraction(const CorruptedInstance& ci) {
    double s = 0.0;
    for (double v : ci.mask.values()) s += v;
    return s / static_cast<double>(ci.mask.size());
}

void check_consistent(const CorruptedInstance& ci) {
    for (std::size_t k = 0; k < ci.y.size(); ++k) {
        CHECK((ci.mask[k] == 0.0 || ci.mask[k] == 1.0));
        if (ci.mask[k] == 0.0) CHECK(ci.y[k] == ci.ground_truth[k]);
    }
}

NoiseSpec spec_of(NoiseKind kind, double density, std::uint64_t seed) {
    NoiseSpec s;
    s.kind = kind;
    s.density = density;
    s.seed = seed;
    return s;
}

}  // namespace

TEST_CASE("rng is reproducible and covers its range") {
    Rng a(123), b(123), c(124);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next();
        CHECK(va == b.next());
        differs |= va != c.next();
    }
    CHECK(differs);
    Rng r(5);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        CHECK(r.below(7) < 7);
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}

TEST_CASE("spn") {
    const Matrix x = gen_test_image(64, 64, 1);
    const CorruptedInstance none = add_spn(x, spec_of(NoiseKind::SPN, 0.0, 1));
    CHECK(none.y == x);
    CHECK(mask_fraction(none) == 0.0);

    NoiseSpec all = spec_of(NoiseKind::SPN, 1.0, 2);
    all.salt_fraction = 1.0;
    const CorruptedInstance salted = add_spn(x, all);
    for (double v : salted.y.values()) CHECK(v == 255.0);

    const Matrix big(512, 512, 100.0);
    const CorruptedInstance half = add_spn(big, spec_of(NoiseKind::SPN, 0.5, 3));
    CHECK(mask_fraction(half) >= 0.494);
    CHECK(mask_fraction(half) <= 0.506);
    check_consistent(half);
    for (std::size_t k = 0; k < half.y.size(); ++k)
        if (half.mask[k] == 1.0) CHECK((half.y[k] == 0.0 || half.y[k] == 255.0));

    CHECK_THROWS_AS((void)add_spn(x, spec_of(NoiseKind::SPN, 1.5, 1)), ConfigError);
    CHECK_THROWS_AS((void)add_spn(x, spec_of(NoiseKind::SPN, -0.1, 1)), ConfigError);
}

TEST_CASE("same seed gives the same instance") {
    const Matrix x = gen_test_image(32, 48, 9);
    const auto a = add_noise(x, spec_of(NoiseKind::RVIN, 0.3, 77));
    const auto b = add_noise(x, spec_of(NoiseKind::RVIN, 0.3, 77));
    CHECK(a.y == b.y);
    CHECK(a.mask == b.mask);
    CHECK(gen_test_image(32, 48, 9) == x);
}

TEST_CASE("rvin") {
    const Matrix x(64, 64, 10.0);
    CHECK(add_rvin(x, spec_of(NoiseKind::RVIN, 0.0, 1)).y == x);

    const Matrix big(1000, 1000, 0.0);
    const CorruptedInstance all = add_rvin(big, spec_of(NoiseKind::RVIN, 1.0, 4));
    double sum = 0.0;
    for (double v : all.y.values()) {
        sum += v;
        CHECK((v >= 0.0 && v <= 255.0));
    }
    CHECK(std::abs(sum / 1e6 - 127.5) <= 1.0);

    const CorruptedInstance some = add_rvin(Matrix(100, 100, 3.0), spec_of(NoiseKind::RVIN, 0.2, 5));
    check_consistent(some);
}

TEST_CASE("mixed") {
    NoiseSpec s = spec_of(NoiseKind::Mixed, 0.0, 6);
    const Matrix x(512, 512, 128.0);
    CHECK(add_mixed(x, s).y == x);
    s.spn_density = 0.25;
    s.rvin_density = 0.15;
    const CorruptedInstance ci = add_mixed(x, s);
    CHECK(std::abs(mask_fraction(ci) - 0.40) <= 0.01);
    check_consistent(ci);
    s.spn_density = 0.7;
    s.rvin_density = 0.4;
    CHECK_THROWS_AS((void)add_mixed(x, s), ConfigError);
}

TEST_CASE("missing samples read as the low value") {
    const Matrix x(64, 64, 200.0);
    CHECK(add_missing(x, spec_of(NoiseKind::Missing, 0.0, 1)).y == x);
    const CorruptedInstance ci = add_missing(x, spec_of(NoiseKind::Missing, 0.4, 2));
    check_consistent(ci);
    for (std::size_t k = 0; k < ci.y.size(); ++k)
        if (ci.mask[k] == 1.0) CHECK(ci.y[k] == 0.0);
    CHECK(mask_fraction(ci) > 0.3);
}

TEST_CASE("synthetic pair") {
    const SyntheticPair zero = gen_synthetic_pair(16, 16, 0.0, 0.0, 128.0, 1);
    CHECK(max_abs(zero.y) == 0.0);

    const SyntheticPair p = gen_synthetic_pair(30, 20, 0.1, 0.25, 128.0, 2);
    CHECK(count_nonzero(p.x0) == 60);
    CHECK(count_nonzero(p.n0) == 150);
    DctPlan plan(30, 20);
    CHECK(max_abs_diff(p.y, plan.inverse(p.x0) + p.n0) < 1e-12);

    const SyntheticPair v = gen_synthetic_pair(317, 317, 1.0, 0.0, 128.0, 3);
    double s = 0.0, s2 = 0.0;
    for (double x : v.x0.values()) {
        s += x;
        s2 += x * x;
    }
    const double n = static_cast<double>(v.x0.size());
    const double var = (s2 - s * s / n) / (n - 1.0);
    CHECK(std::abs(var - 128.0) <= 3.0);

    CHECK_THROWS_AS((void)gen_synthetic_pair(8, 8, 1.2, 0.0, 1.0, 1), ConfigError);
}

TEST_CASE("test image stays in the 8-bit range") {
    const Matrix img = gen_test_image(128, 96, 4);
    CHECK(img.rows() == 128);
    CHECK(img.cols() == 96);
    std::set<double> distinct(img.values().begin(), img.values().end());
    CHECK(distinct.size() > 100);
    for (double v : img.values()) CHECK((v >= 0.0 && v <= 255.0));
}
