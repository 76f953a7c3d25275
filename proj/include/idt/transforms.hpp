#pragma once

#include "idt/matrix.hpp"

#include <cstddef>
#include <memory>

namespace idt {

/// Orthonormal DCT-II basis of size m. Row i is the i-th basis vector:
/// D[0][j] = sqrt(1/m), D[i][j] = sqrt(2/m) cos(pi (2j+1) i / (2m)).
[[nodiscard]] Matrix dct_matrix(std::size_t m);

/// Separable orthonormal DCT-II over an m x n grid (n = 1 for 1-D signals).
///
/// forward(X) = D_m X D_n^T, inverse(C) = D_m^T C D_n. The default path runs
/// FFTW's REDFT10/REDFT01 kernels with orthonormal scaling; the direct path
/// multiplies by the cached basis matrices and serves as a cross-check.
///
/// A plan is immutable once built and may be shared between threads.
class DctPlan {
public:
    DctPlan(std::size_t rows, std::size_t cols = 1);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    [[nodiscard]] Matrix forward(const Matrix& x) const;
    [[nodiscard]] Matrix inverse(const Matrix& c) const;

    /// Same maps computed as explicit products with the basis matrices, O(mn(m+n)).
    [[nodiscard]] Matrix forward_direct(const Matrix& x) const;
    [[nodiscard]] Matrix inverse_direct(const Matrix& c) const;

    [[nodiscard]] const Matrix& row_basis() const noexcept { return basis_rows_; }
    [[nodiscard]] const Matrix& col_basis() const noexcept { return basis_cols_; }

private:
    struct FftwKernels;

    void check_shape(const Matrix& m, const char* what) const;

    std::size_t rows_;
    std::size_t cols_;
    Matrix basis_rows_;
    Matrix basis_cols_;
    std::vector<double> forward_scale_rows_;
    std::vector<double> forward_scale_cols_;
    std::vector<double> inverse_scale_rows_;
    std::vector<double> inverse_scale_cols_;
    std::shared_ptr<const FftwKernels> kernels_;
};

/// max |entry| of B^T (x) A, computed as max|A| * max|B| without forming the
/// Kronecker product.
[[nodiscard]] double kron_infnorm(const Matrix& a, const Matrix& b);

/// Closed form of max |entry| of D_m (x) D_m for the orthonormal DCT-II:
/// (2/m) cos^2(pi/(2m)) when m > 1 is a power of two, 2/m for other m > 1,
/// and 1 for m = 1.
[[nodiscard]] double dct_infnorm_squared(std::size_t m);

/// Sparsity level below which the sparsest decomposition Y = A X B + N is
/// unique: (1 + 1/max|B^T (x) A|) / 2. Warns when B^T (x) A is not orthonormal.
[[nodiscard]] double uniqueness_bound(const Matrix& a, const Matrix& b);

/// True when Q^T Q = I to within `tol` in max-norm.
[[nodiscard]] bool is_orthonormal(const Matrix& q, double tol = 1e-9);

} // namespace idt
