#include "idt/analysis.hpp"

#include "idt/log.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>

namespace idt {

double mutual_coherence(const Matrix& c) {
    if (c.empty()) {
        throw DimensionError("mutual_coherence: empty matrix");
    }
    if (!is_orthonormal(c, 1e-9)) {
        log_warning("mutual_coherence: basis is not orthonormal");
    }
    return max_abs(c);
}

UniquenessReport check_uniqueness(std::size_t m, std::size_t n, int k1, int k2) {
    if (m == 0 || n == 0) {
        throw DimensionError("check_uniqueness: dimensions must be positive");
    }
    if (k1 < 0 || k2 < 0) {
        throw ConfigError("check_uniqueness: sparsity levels must be nonnegative");
    }
    UniquenessReport r;
    r.coherence = kron_infnorm(dct_matrix(m).transposed(), dct_matrix(n));
    r.bound = 0.5 * (1.0 + 1.0 / r.coherence);
    r.k1 = k1;
    r.k2 = k2;
    r.satisfied = static_cast<double>(k1 + k2) < r.bound;
    return r;
}

UniquenessReport check_uniqueness(const DctPlan& plan, int k1, int k2) {
    return check_uniqueness(plan.rows(), plan.cols(), k1, k2);
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
    Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            for (std::size_t p = 0; p < b.rows(); ++p) {
                for (std::size_t q = 0; q < b.cols(); ++q) {
                    k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
                }
            }
        }
    }
    return k;
}

namespace {

double binomial(std::size_t n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) {
        r = r * static_cast<double>(n - static_cast<std::size_t>(i)) / static_cast<double>(i + 1);
    }
    return r;
}

// Visits all k-subsets of {0..n-1} in lexicographic order.
void for_each_subset(std::size_t n, int k, const std::function<void(const std::vector<std::size_t>&)>& visit) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(k));
    const std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == idx.size()) {
            visit(idx);
            return;
        }
        for (std::size_t v = start; v + (idx.size() - pos) <= n; ++v) {
            idx[pos] = v;
            rec(pos + 1, v + 1);
        }
    };
    rec(0, 0);
}

// Column j is vec(inverse(e_j)); maps vec(X) to vec(D^{-1}(X)).
Eigen::MatrixXd synthesis_operator(const DctPlan& plan) {
    const std::size_t total = plan.rows() * plan.cols();
    Eigen::MatrixXd op(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
    for (std::size_t j = 0; j < total; ++j) {
        Matrix unit(plan.rows(), plan.cols());
        unit[j] = 1.0;
        const Matrix col = plan.inverse(unit);
        for (std::size_t i = 0; i < total; ++i) {
            op(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
        }
    }
    return op;
}

} // namespace

double brute_force_budget(std::size_t length, int k_max) {
    double total = 0.0;
    for (int kx = 0; kx <= k_max; ++kx) {
        for (int kn = 0; kn <= k_max; ++kn) {
            total += binomial(length, kx) * binomial(length, kn);
        }
    }
    return total;
}

std::vector<SparseDecomposition> brute_force_sparsest(const Matrix& y, const DctPlan& plan, int k_max,
                                                      std::optional<double> tol) {
    if (plan.cols() != 1 || y.cols() != 1 || y.rows() != plan.rows()) {
        throw DimensionError("brute_force_sparsest: requires a 1-D plan matching y");
    }
    const std::size_t m = y.rows();
    if (m > 12) {
        throw ConfigError("brute_force_sparsest: signal length above 12");
    }
    if (k_max < 0 || k_max > 3 || static_cast<std::size_t>(k_max) > m) {
        throw ConfigError("brute_force_sparsest: k_max must lie in [0, min(3, length)]");
    }
    if (brute_force_budget(m, k_max) > 1e6) {
        throw ConfigError("brute_force_sparsest: enumeration budget exceeded");
    }
    const double eps = tol.value_or(1e-8 * frobenius_norm(y));

    const Eigen::MatrixXd synth = synthesis_operator(plan);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        rhs(static_cast<Eigen::Index>(i)) = y[i];
    }

    std::vector<SparseDecomposition> found;
    for (int total = 0; total <= 2 * k_max && found.empty(); ++total) {
        for (int kx = std::max(0, total - k_max); kx <= std::min(total, k_max); ++kx) {
            const int kn = total - kx;
            for_each_subset(m, kx, [&](const std::vector<std::size_t>& sx) {
                for_each_subset(m, kn, [&](const std::vector<std::size_t>& sn) {
                    const auto cols = static_cast<Eigen::Index>(total);
                    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), cols);
                    Eigen::Index c = 0;
                    for (std::size_t s : sx) {
                        a.col(c++) = synth.col(static_cast<Eigen::Index>(s));
                    }
                    for (std::size_t s : sn) {
                        a(static_cast<Eigen::Index>(s), c++) = 1.0;
                    }
                    Eigen::VectorXd coef = Eigen::VectorXd::Zero(cols);
                    if (cols > 0) {
                        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
                        if (qr.rank() < cols) {
                            return;  // a sparser support already spans this solution
                        }
                        coef = qr.solve(rhs);
                    }
                    if ((a * coef - rhs).norm() > eps) {
                        return;
                    }
                    for (Eigen::Index i = 0; i < cols; ++i) {
                        if (std::abs(coef(i)) <= eps) {
                            return;
                        }
                    }
                    SparseDecomposition d{sx, sn, Matrix(m, 1), Matrix(m, 1)};
                    Eigen::Index i = 0;
                    for (std::size_t s : sx) {
                        d.x[s] = coef(i++);
                    }
                    for (std::size_t s : sn) {
                        d.n[s] = coef(i++);
                    }
                    found.push_back(std::move(d));
                });
            });
        }
    }
    return found;
}

std::vector<SupportFit> enumerate_support_fits(const Matrix& y, const DctPlan& plan) {
    if (y.rows() != plan.rows() || y.cols() != plan.cols()) {
        throw DimensionError("enumerate_support_fits: y does not match plan");
    }
    const std::size_t total = y.size();
    if (total > 6) {
        throw ConfigError("enumerate_support_fits: grid too large for exhaustive enumeration");
    }
    const Eigen::MatrixXd synth = synthesis_operator(plan);
    const auto t = static_cast<Eigen::Index>(total);
    Eigen::VectorXd yv(t);
    for (std::size_t i = 0; i < total; ++i) {
        yv(static_cast<Eigen::Index>(i)) = y[i];
    }

    const std::size_t masks = std::size_t{1} << total;
    std::vector<SupportFit> fits;
    fits.reserve(masks * masks);
    for (std::size_t m1 = 0; m1 < masks; ++m1) {
        for (std::size_t m2 = 0; m2 < masks; ++m2) {
            // With N = y - S x, minimize ||P1 x||^2 + ||P2 (y - S x)||^2 where
            // P1, P2 select the off-support entries.
            Eigen::VectorXd p1(t);
            Eigen::VectorXd p2(t);
            for (std::size_t i = 0; i < total; ++i) {
                p1(static_cast<Eigen::Index>(i)) = (m1 >> i) & 1U ? 0.0 : 1.0;
                p2(static_cast<Eigen::Index>(i)) = (m2 >> i) & 1U ? 0.0 : 1.0;
            }
            Eigen::MatrixXd a(2 * t, t);
            a.topRows(t) = p1.asDiagonal();
            a.bottomRows(t) = p2.asDiagonal() * synth;
            Eigen::VectorXd b(2 * t);
            b.head(t).setZero();
            b.tail(t) = p2.asDiagonal() * yv;
            const Eigen::VectorXd xv = a.completeOrthogonalDecomposition().solve(b);
            const Eigen::VectorXd nv = yv - synth * xv;

            SupportFit f{Matrix(y.rows(), y.cols()), Matrix(y.rows(), y.cols()), Matrix(y.rows(), y.cols()),
                         Matrix(y.rows(), y.cols()), 0.0, 0.0};
            for (std::size_t i = 0; i < total; ++i) {
                const auto ii = static_cast<Eigen::Index>(i);
                f.t1[i] = 1.0 - p1(ii);
                f.t2[i] = 1.0 - p2(ii);
                f.x[i] = xv(ii);
                f.n[i] = nv(ii);
                f.off_support_energy += p1(ii) * xv(ii) * xv(ii) + p2(ii) * nv(ii) * nv(ii);
                f.support_size += f.t1[i] + f.t2[i];
            }
            fits.push_back(std::move(f));
        }
    }
    return fits;
}

std::optional<double> epsilon_level(const std::vector<SupportFit>& fits, double zero_tol) {
    std::optional<double> best;
    for (const auto& f : fits) {
        if (f.off_support_energy > zero_tol && (!best || f.off_support_energy < *best)) {
            best = f.off_support_energy;
        }
    }
    return best;
}

SupportFit minimize_f_lambda(const std::vector<SupportFit>& fits, double lambda) {
    if (fits.empty()) {
        throw ConfigError("minimize_f_lambda: no candidate supports");
    }
    const SupportFit* best = &fits.front();
    double best_cost = best->off_support_energy + lambda * best->support_size;
    for (const auto& f : fits) {
        const double cost = f.off_support_energy + lambda * f.support_size;
        if (cost < best_cost) {
            best = &f;
            best_cost = cost;
        }
    }
    return *best;
}

} // namespace idt
