#include "oracles.hpp"

#include "idt/metrics.hpp"
#include "idt/noise.hpp"
#include "idt/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace idt;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double scale = 10.0) {
    Matrix m(r, c);
    for (auto& v : m.values()) v = scale * rng.normal();
    return m;
}

}  // namespace

TEST_CASE("hard threshold keeps ties and zeroes smaller entries") {
    const Matrix m{{-3.0, 2.0, 0.5}, {2.0, -1.999, 0.0}};
    const Matrix t = hard_threshold(m, 2.0);
    CHECK(t == Matrix{{-3.0, 2.0, 0.0}, {2.0, 0.0, 0.0}});

    Rng rng(3);
    const Matrix r = random_matrix(20, 20, rng);
    for (double th : {0.0, 1.0, 5.0, 30.0}) {
        const Matrix h = hard_threshold(r, th);
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (h[k] != 0.0) {
                CHECK(std::abs(h[k]) >= th);
                CHECK(h[k] == r[k]);
            } else if (r[k] != 0.0) {
                CHECK(std::abs(r[k]) < th);
            }
        }
    }
}

TEST_CASE("hard threshold picks the cost-minimizing support on 3x3") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix x = random_matrix(3, 3, rng, 2.0);
        const Matrix zero(3, 3);
        const double lambda = rng.uniform(0.1, 4.0);
        double best = INFINITY;
        Matrix best_mask;
        for (unsigned bits = 0; bits < 512; ++bits) {
            Matrix t(3, 3);
            for (std::size_t k = 0; k < 9; ++k) t[k] = (bits >> k) & 1u ? 1.0 : 0.0;
            const double c = cost_f_lambda(x, zero, t, zero, lambda);
            if (c < best - 1e-12) {
                best = c;
                best_mask = t;
            }
        }
        const Matrix h = hard_threshold(x, std::sqrt(lambda));
        for (std::size_t k = 0; k < 9; ++k) CHECK((h[k] != 0.0) == (best_mask[k] == 1.0));
    }
}

TEST_CASE("cost_f_lambda examples") {
    CHECK(cost_f_lambda(Matrix{{2.0}}, Matrix{{1.0}}, Matrix{{1.0}}, Matrix{{0.0}}, 0.5) == doctest::Approx(1.5));
    const Matrix x{{1.0, 2.0}, {3.0, 4.0}};
    const Matrix n{{-1.0, 0.0}, {0.5, 2.0}};
    const Matrix zero(2, 2);
    const Matrix one(2, 2, 1.0);
    CHECK(cost_f_lambda(x, n, zero, zero, 3.0) == doctest::Approx(30.0 + 5.25));
    CHECK(cost_f_lambda(x, n, one, one, 0.7) == doctest::Approx(0.7 * 8));
    CHECK_THROWS_AS((void)cost_f_lambda(x, n, Matrix(2, 2, 0.5), zero, 1.0), ConfigError);
}

TEST_CASE("projection matches the explicit least-squares projection") {
    const std::size_t m = 8;
    DctPlan plan(m, m);
    const Eigen::MatrixXd d = oracle::dct_basis(m);
    // Row-major vec(D^T X D) = (D^T kron D^T) vec(X).
    const Eigen::MatrixXd a = oracle::kron(d.transpose(), d.transpose());
    Eigen::MatrixXd sys(64, 128);
    sys << a, Eigen::MatrixXd::Identity(64, 64);
    const Eigen::MatrixXd gram = sys * sys.transpose();
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);

    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix x = random_matrix(m, m, rng);
        const Matrix n = random_matrix(m, m, rng);
        const Matrix y = random_matrix(m, m, rng);
        const SparsePair p = project_onto_w(x, n, y, plan);
        CHECK(feasibility_gap(p, y, plan) <= 1e-9 * frobenius_norm(y));

        Eigen::VectorXd z(128);
        z << oracle::vec(x), oracle::vec(n);
        const Eigen::VectorXd r = sys * z - oracle::vec(y);
        const Eigen::VectorXd zp = z - sys.transpose() * ldlt.solve(r);
        CHECK(max_abs_diff(p.x, oracle::unvec(zp.head(64), m, m)) < 1e-8);
        CHECK(max_abs_diff(p.n, oracle::unvec(zp.tail(64), m, m)) < 1e-8);
    }
}

TEST_CASE("projection examples") {
    DctPlan plan(6, 5);
    Rng rng(5);
    const Matrix x = random_matrix(6, 5, rng);
    const Matrix n = random_matrix(6, 5, rng);
    const Matrix y = plan.inverse(x) + n;
    const SparsePair p = project_onto_w(x, n, y, plan);
    CHECK(max_abs_diff(p.x, x) < 1e-10);
    CHECK(max_abs_diff(p.n, n) < 1e-10);

    const Matrix zero(6, 5);
    const SparsePair q = project_onto_w(zero, zero, y, plan);
    CHECK(max_abs_diff(q.x, 0.5 * plan.forward(y)) < 1e-12);
    CHECK(max_abs_diff(q.n, 0.5 * y) < 1e-12);
    CHECK_THROWS_AS((void)project_onto_w(Matrix(5, 5), zero, y, plan), DimensionError);
}

TEST_CASE("clip") {
    CHECK(clip(Matrix{{-5.0, 260.0}}, 0.0, 255.0) == Matrix{{0.0, 255.0}});
    const Matrix inside{{1.0, 100.0}, {254.0, 0.0}};
    CHECK(clip(inside, 0.0, 255.0) == inside);
    Rng rng(1);
    const Matrix r = random_matrix(10, 10, rng, 200.0);
    const Matrix once = clip(r, 0.0, 255.0);
    CHECK(clip(once, 0.0, 255.0) == once);
    CHECK_THROWS_AS((void)clip(r, 1.0, 1.0), ConfigError);
}

TEST_CASE("gaussian filter") {
    const Matrix c(7, 9, 42.0);
    CHECK(max_abs_diff(gaussian_filter(c, 0.55), c) < 1e-12);

    const auto w = gaussian_kernel(0.4);
    CHECK(w.size() == 5);
    Matrix imp(9, 9);
    imp(4, 4) = 1.0;
    CHECK(gaussian_filter(imp, 0.4)(4, 4) == doctest::Approx(w[2] * w[2]).epsilon(1e-14));

    Rng rng(8);
    const Matrix r = random_matrix(12, 10, rng);
    for (double s : {0.4, 0.55, 1.3}) CHECK(max_abs_diff(gaussian_filter(r, s), oracle::gaussian_2d(r, s)) < 1e-10);

    // A row-constant interior keeps its row sums.
    Matrix rows(9, 9);
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j) rows(i, j) = static_cast<double>(i == 4);
    const Matrix fr = gaussian_filter(rows, 0.4);
    double before = 0.0, after = 0.0;
    for (std::size_t j = 0; j < 9; ++j) {
        for (std::size_t i = 2; i <= 6; ++i) {
            before += rows(i, j);
            after += fr(i, j);
        }
    }
    CHECK(std::abs(before - after) < 1e-10);

    CHECK_THROWS_AS((void)gaussian_filter(r, 0.0), ConfigError);
    CHECK_THROWS_AS((void)gaussian_kernel(-1.0), ConfigError);
}

TEST_CASE("gaussian filter on a 1-D column smooths along its length") {
    Matrix col(9, 1);
    col(4, 0) = 1.0;
    const auto w = gaussian_kernel(0.55);
    const Matrix f = gaussian_filter(col, 0.55);
    CHECK(f(4, 0) == doctest::Approx(w[w.size() / 2]));
}

TEST_CASE("idt recovers a noise-free sparse signal") {
    const std::size_t m = 64;
    DctPlan plan(m, m);
    const SyntheticPair sp = gen_synthetic_pair(m, m, 0.1, 0.0, 128.0, 9);
    const RecoveryResult r = idt::idt(sp.y, plan, SolverConfig{});
    CHECK(snr(r.x_hat, sp.x0) > 60.0);
}

TEST_CASE("idt keeps every projected pair feasible") {
    const std::size_t m = 32;
    DctPlan plan(m, m);
    const SyntheticPair sp = gen_synthetic_pair(m, m, 0.1, 0.1, 128.0, 4);
    std::vector<double> schedule;
    for (int k = 0; k < 20; ++k) schedule.push_back(60.0 * std::pow(0.7, k));
    const RecoveryResult r = idt::idt(sp.y, plan, schedule, 1e-6 * frobenius_norm(sp.y), 200);
    CHECK(feasibility_gap(SparsePair{r.x_hat, r.n_hat}, sp.y, plan) <= 1e-9 * frobenius_norm(sp.y));
    for (const auto& rec : r.trace) CHECK(std::isfinite(rec.residual));
}

TEST_CASE("idt rejects bad schedules and handles Y = 0") {
    DctPlan plan(4, 4);
    const Matrix y(4, 4);
    CHECK_THROWS_AS((void)idt::idt(y, plan, std::vector<double>{1.0, 2.0}, 1e-3), ConfigError);
    CHECK_THROWS_AS((void)idt::idt(y, plan, std::vector<double>{1.0, -1.0}, 1e-3), ConfigError);
    CHECK_THROWS_AS((void)idt::idt(y, plan, std::vector<double>{2.0, 1.0}, 0.0), ConfigError);
    const RecoveryResult r = idt::idt(y, plan, std::vector<double>{2.0, 1.0}, 1e-3);
    CHECK(max_abs(r.x_hat) == 0.0);
    CHECK(max_abs(r.n_hat) == 0.0);
    const RecoveryResult d = idt::idt(y, plan, SolverConfig{});
    CHECK(max_abs(d.x_hat) == 0.0);
}

TEST_CASE("modified idt on noise-free sparse data leaves no noise") {
    const std::size_t m = 32;
    DctPlan plan(m, m);
    const SyntheticPair sp = gen_synthetic_pair(m, m, 0.1, 0.0, 128.0, 21);
    SolverConfig cfg;
    cfg.beta1 = max_abs(plan.forward(sp.y));
    cfg.alpha1 = std::log(1e6) / 60.0;
    cfg.beta2 = max_abs(sp.y);
    cfg.alpha2 = cfg.alpha1;
    const RecoveryResult r = modified_idt(sp.y, plan, cfg);
    CHECK(frobenius_norm(r.n_hat) < 1e-6 * frobenius_norm(sp.y));
}

TEST_CASE("modified idt without clip or filter stays feasible at every iteration") {
    const std::size_t m = 16;
    DctPlan plan(m, m);
    const SyntheticPair sp = gen_synthetic_pair(m, m, 0.15, 0.1, 128.0, 5);
    SolverConfig cfg;
    cfg.beta1 = max_abs(plan.forward(sp.y));
    cfg.beta2 = max_abs(sp.y);
    cfg.alpha1 = cfg.alpha2 = 0.2;
    cfg.stop_delta = 0.0;
    for (int iters = 1; iters <= 12; ++iters) {
        cfg.max_iters = iters;
        const RecoveryResult r = modified_idt(sp.y, plan, cfg);
        CHECK(max_abs_diff(plan.inverse(r.x_hat) + r.n_hat, sp.y) < 1e-10 * std::max(1.0, max_abs(sp.y)));
    }
}

TEST_CASE("modified idt runs K iterations, validates and is deterministic") {
    DctPlan plan(32, 32);
    const Matrix img = gen_test_image(32, 32, 2);
    NoiseSpec spec;
    spec.density = 0.3;
    spec.seed = 3;
    const CorruptedInstance ci = add_spn(img, spec);
    SolverConfig cfg;
    cfg.beta1 = max_abs(plan.forward(ci.y));
    cfg.beta2 = 255.0;
    cfg.alpha1 = std::log(cfg.beta1) / 60.0;
    cfg.alpha2 = std::log(255.0 / 30.0) / 60.0;
    cfg.stop_delta = 0.0;
    cfg.enable_clip = true;
    cfg.enable_filter = true;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);  // clip without a range
    cfg.clip_range = ClipRange{};
    const RecoveryResult a = modified_idt(ci.y, plan, cfg, TraceReference{&img});
    const RecoveryResult b = modified_idt(ci.y, plan, cfg, TraceReference{&img});
    CHECK(a.trace.size() == 60);
    CHECK(a.iterations_used == 60);
    for (std::size_t k = 0; k < a.trace.size(); ++k) {
        CHECK(a.trace[k].k == static_cast<int>(k));
        CHECK(std::isfinite(a.trace[k].residual));
        REQUIRE(a.trace[k].psnr.has_value());
        CHECK(a.trace[k].residual == b.trace[k].residual);
        CHECK(*a.trace[k].psnr == *b.trace[k].psnr);
        CHECK(a.trace[k].threshold1 == doctest::Approx(cfg.beta1 * std::exp(-cfg.alpha1 * static_cast<double>(k))));
    }
    CHECK(a.x_hat == b.x_hat);
    CHECK(max_abs(a.x_hat_spatial) <= 255.0);
}

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    cfg.beta1 = 1.0;
    cfg.beta2 = 1.0;
    CHECK_NOTHROW(cfg.validate());
    cfg.alpha1 = -0.1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.alpha1 = 0.0;
    cfg.sigma = 0.0;
    cfg.enable_filter = true;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
