#include "oracles.hpp"

#include "idt/noise.hpp"
#include "idt/transforms.hpp"

#include <doctest.h>

#include <cmath>

using namespace idt;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(r, c);
    for (auto& v : m.values()) v = rng.uniform(-100.0, 100.0);
    return m;
}

}  // namespace

TEST_CASE("dct_matrix matches the cosine formula and is orthonormal") {
    for (std::size_t m : {1, 2, 3, 4, 5, 7, 8, 16, 64}) {
        const Matrix d = dct_matrix(m);
        const Matrix ref = oracle::from_eigen(oracle::dct_basis(m));
        CHECK(max_abs_diff(d, ref) < 1e-14);
        CHECK(max_abs_diff(matmul(d.transposed(), d), Matrix::identity(m)) < 1e-12);
        CHECK(is_orthonormal(d));
    }
}

TEST_CASE("fast and direct transforms agree and round-trip") {
    for (auto [r, c] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 5}, {7, 1}, {8, 8}, {16, 4}, {64, 64}, {1, 1}}) {
        DctPlan plan(r, c);
        const Matrix x = random_matrix(r, c, r * 100 + c);
        const Matrix f = plan.forward(x);
        CHECK(max_abs_diff(f, plan.forward_direct(x)) < 1e-9);
        CHECK(max_abs_diff(plan.inverse(f), plan.inverse_direct(f)) < 1e-9);
        CHECK(max_abs_diff(plan.inverse(f), x) < 1e-12 * std::max(1.0, max_abs(x)));
        // Parseval
        CHECK(frobenius_norm(f) == doctest::Approx(frobenius_norm(x)).epsilon(1e-12));
    }
}

TEST_CASE("forward equals D_m X D_n^T computed with oracle bases") {
    const std::size_t r = 5, c = 6;
    DctPlan plan(r, c);
    const Matrix x = random_matrix(r, c, 7);
    const Eigen::MatrixXd dm = oracle::dct_basis(r);
    const Eigen::MatrixXd dn = oracle::dct_basis(c);
    Eigen::MatrixXd xe(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) xe(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x(i, j);
    const Matrix expected = oracle::from_eigen(dm * xe * dn.transpose());
    CHECK(max_abs_diff(plan.forward(x), expected) < 1e-10);
}

TEST_CASE("transform rejects mismatched shapes") {
    DctPlan plan(4, 4);
    CHECK_THROWS_AS((void)plan.forward(Matrix(4, 3)), DimensionError);
    CHECK_THROWS_AS((void)plan.inverse(Matrix(3, 4)), DimensionError);
}

TEST_CASE("dct_infnorm_squared equals the max entry of materialized D kron D") {
    for (std::size_t m = 1; m <= 16; ++m) {
        const Eigen::MatrixXd d = oracle::dct_basis(m);
        const double oracle_max = oracle::kron(d, d).cwiseAbs().maxCoeff();
        CHECK(std::abs(dct_infnorm_squared(m) - oracle_max) < 1e-12);
    }
}

TEST_CASE("kron_infnorm equals the max entry of the explicit product") {
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{2, 3}, {4, 4}, {8, 1}, {3, 7}}) {
        const Matrix a = dct_matrix(m).transposed();
        const Matrix b = dct_matrix(n);
        const Eigen::MatrixXd k = oracle::kron(oracle::dct_basis(n), oracle::dct_basis(m).transpose());
        CHECK(std::abs(kron_infnorm(a, b) - k.cwiseAbs().maxCoeff()) < 1e-12);
    }
}

TEST_CASE("uniqueness bound for length 8") {
    const Matrix a = dct_matrix(8).transposed();
    const Matrix b = Matrix::identity(1);
    CHECK(uniqueness_bound(a, b) == doctest::Approx(0.5 * (1.0 + 1.0 / 0.4903926402016152)).epsilon(1e-12));
    CHECK(uniqueness_bound(Matrix::identity(4), Matrix::identity(1)) == doctest::Approx(1.0));
}
