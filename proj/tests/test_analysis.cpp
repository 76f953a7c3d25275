#include "oracles.hpp"

#include "idt/analysis.hpp"
#include "idt/experiments.hpp"
#include "idt/noise.hpp"

#include <doctest.h>

#include <cmath>

using namespace idt;

TEST_CASE("mutual coherence") {
    CHECK(mutual_coherence(Matrix::identity(5)) == 1.0);
    CHECK(mutual_coherence(dct_matrix(8)) == doctest::Approx(0.490392640).epsilon(1e-9));
    const Matrix perm{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}};
    CHECK(mutual_coherence(perm) == 1.0);
    CHECK_THROWS_AS((void)mutual_coherence(Matrix()), DimensionError);
}

TEST_CASE("uniqueness condition for length 8") {
    const UniquenessReport one = check_uniqueness(8, 1, 1, 0);
    CHECK(one.bound == doctest::Approx(1.5196).epsilon(1e-4));
    CHECK(one.satisfied);
    const UniquenessReport two = check_uniqueness(8, 1, 1, 1);
    CHECK_FALSE(two.satisfied);
    const UniquenessReport trivial = check_uniqueness(1, 1, 0, 0);
    CHECK(trivial.coherence == 1.0);
    CHECK(trivial.bound == 1.0);
    CHECK(trivial.satisfied);
}

TEST_CASE("coherence from the factors equals coherence of the materialized product") {
    for (std::size_t m = 1; m <= 8; ++m) {
        for (std::size_t n = 1; m * n <= 64; ++n) {
            const Eigen::MatrixXd k = oracle::kron(oracle::dct_basis(n), oracle::dct_basis(m).transpose());
            const double via_matrix = mutual_coherence(kronecker(dct_matrix(n), dct_matrix(m).transposed()));
            CHECK(std::abs(check_uniqueness(m, n, 0, 0).coherence - via_matrix) < 1e-12);
            CHECK(std::abs(via_matrix - k.cwiseAbs().maxCoeff()) < 1e-12);
        }
    }
}

TEST_CASE("closed form matches for large sizes") {
    const AnalyzeReport r = analyze(256, 256);
    const double c = std::cos(std::numbers::pi / 512.0);
    CHECK(r.closed_form == doctest::Approx(2.0 / 256.0 * c * c).epsilon(1e-12));
    CHECK(r.coherence == doctest::Approx(r.closed_form).epsilon(1e-12));
    CHECK(r.bound == doctest::Approx(0.5 * (1.0 + 1.0 / r.closed_form)));
    const AnalyzeReport one = analyze(1, 1);
    CHECK(one.coherence == 1.0);
    CHECK(one.bound == 1.0);
}

TEST_CASE("every single-atom instance is recovered uniquely") {
    for (std::size_t m : {4, 8}) {
        DctPlan plan(m, 1);
        const Matrix basis = dct_matrix(m);
        int families = 0;
        for (int which = 0; which < 2; ++which) {
            for (std::size_t pos = 0; pos < m; ++pos) {
                for (double sign : {1.0, -1.0}) {
                    Matrix x(m, 1), n(m, 1);
                    (which == 0 ? x : n)(pos, 0) = 1.5 * sign;
                    const Matrix y = plan.inverse(x) + n;
                    const auto sols = brute_force_sparsest(y, plan, 1);
                    REQUIRE(sols.size() == 1);
                    const auto& s = sols.front();
                    CHECK(s.support_x.size() + s.support_n.size() == 1);
                    CHECK(max_abs_diff(s.x, x) < 1e-9);
                    CHECK(max_abs_diff(s.n, n) < 1e-9);
                    ++families;
                }
            }
        }
        CHECK(families == static_cast<int>(4 * m));
    }
}

TEST_CASE("brute force edge cases") {
    DctPlan plan(8, 1);
    const auto zero = brute_force_sparsest(Matrix(8, 1), plan, 2);
    REQUIRE(zero.size() == 1);
    CHECK(zero.front().support_x.empty());
    CHECK(zero.front().support_n.empty());

    const PlantedCheck pc = planted_brute_force(8, 1, 1, 42);
    CHECK(pc.planted_found);
    CHECK_FALSE(pc.solutions.empty());

    DctPlan big(12, 1);
    CHECK_THROWS_AS((void)brute_force_sparsest(Matrix(12, 1, 1.0), big, 4), ConfigError);
    CHECK(brute_force_budget(8, 1) == doctest::Approx(1.0 + 16.0 + 64.0));
}

TEST_CASE("surrogate minimizer is the sparsest pair below the epsilon level") {
    DctPlan plan(2, 2);
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix x(2, 2), n(2, 2);
        const auto px = static_cast<std::size_t>(rng.below(4));
        const auto pn = static_cast<std::size_t>(rng.below(4));
        if (trial % 2 == 0) {
            x[px] = rng.uniform(1.0, 3.0);
        } else {
            n[pn] = -rng.uniform(1.0, 3.0);
        }
        const Matrix y = plan.inverse(x) + n;
        const auto fits = enumerate_support_fits(y, plan);
        CHECK(fits.size() == 256);
        const auto eps = epsilon_level(fits);
        REQUIRE(eps.has_value());
        const SupportFit best = minimize_f_lambda(fits, 0.9 * *eps / 1.0);
        CHECK(best.off_support_energy < 1e-12);
        CHECK(best.support_size == 1.0);
        CHECK(max_abs_diff(best.x, x) < 1e-9);
        CHECK(max_abs_diff(best.n, n) < 1e-9);

        // Past the convex limit every coefficient is charged and the empty support wins.
        const SupportFit none = minimize_f_lambda(fits, 1e9);
        CHECK(none.support_size == 0.0);
    }
}
