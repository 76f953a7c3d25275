#pragma once

#include "idt/matrix.hpp"
#include "idt/transforms.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace idt {

/// Coherence between the identity basis and the orthonormal basis whose
/// vectors are the columns of `c`: max |entry|. Warns if `c` is not
/// orthonormal to 1e-9.
[[nodiscard]] double mutual_coherence(const Matrix& c);

struct UniquenessReport {
    double coherence = 0.0;  ///< max |entry| of B^T (x) A
    double bound = 0.0;      ///< (1 + 1/coherence) / 2
    int k1 = 0;
    int k2 = 0;
    bool satisfied = false;  ///< k1 + k2 < bound
};

/// Evaluates the sufficient uniqueness condition for an m x n DCT model
/// (inverse(X) = D_m^T X D_n) at sparsity levels k1 (coefficients) and k2
/// (noise).
[[nodiscard]] UniquenessReport check_uniqueness(std::size_t m, std::size_t n, int k1, int k2);
[[nodiscard]] UniquenessReport check_uniqueness(const DctPlan& plan, int k1, int k2);

/// Explicit Kronecker product a (x) b.
[[nodiscard]] Matrix kronecker(const Matrix& a, const Matrix& b);

struct SparseDecomposition {
    std::vector<std::size_t> support_x;
    std::vector<std::size_t> support_n;
    Matrix x;  ///< m x 1 coefficients
    Matrix n;  ///< m x 1 noise
};

/// Exhaustive search for the sparsest exact decompositions y = D^T x + n of a
/// 1-D signal (length <= 12) with at most k_max (<= 3) nonzeros in each of x
/// and n. Support pairs are visited by increasing total size, then
/// lexicographically; all solutions of the smallest total size whose
/// residual is within `tol` and whose entries on the support exceed `tol`
/// in magnitude are returned. Empty when no decomposition fits the limits.
/// `tol` defaults to 1e-8 * ||y||_2.
[[nodiscard]] std::vector<SparseDecomposition> brute_force_sparsest(const Matrix& y, const DctPlan& plan, int k_max,
                                                                    std::optional<double> tol = std::nullopt);

/// Number of support pairs brute_force_sparsest would visit at most.
[[nodiscard]] double brute_force_budget(std::size_t length, int k_max);

/// Minimizer of the surrogate cost's data term for fixed supports: the
/// feasible pair minimizing ||(1-T1).X||^2 + ||(1-T2).N||^2.
struct SupportFit {
    Matrix t1;
    Matrix t2;
    Matrix x;
    Matrix n;
    double off_support_energy = 0.0;
    double support_size = 0.0;
};

/// Fits every (T1, T2) pair of binary masks for a tiny grid (m * n <= 6).
[[nodiscard]] std::vector<SupportFit> enumerate_support_fits(const Matrix& y, const DctPlan& plan);

/// Smallest nonzero off-support energy over all support fits (the level
/// below which lambda must fall for the surrogate to pick the sparsest pair).
/// Returns nullopt when every fit is exact.
[[nodiscard]] std::optional<double> epsilon_level(const std::vector<SupportFit>& fits, double zero_tol = 1e-12);

/// Support fit minimizing off_support_energy + lambda * support_size; ties
/// resolve to the earliest fit in enumeration order.
[[nodiscard]] SupportFit minimize_f_lambda(const std::vector<SupportFit>& fits, double lambda);

} // namespace idt
