#include "idt/transforms.hpp"

#include "idt/log.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace idt {

namespace {

// FFTW's planner is not re-entrant; execution of an existing plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

// Factors turning FFTW's unnormalized REDFT10 output into the orthonormal
// DCT-II: sqrt(1/(4m)) for k = 0, sqrt(1/(2m)) otherwise. A singleton
// dimension is not transformed at all.
std::vector<double> forward_scale(std::size_t m) {
    if (m == 1) {
        return {1.0};
    }
    std::vector<double> s(m, std::sqrt(1.0 / (2.0 * static_cast<double>(m))));
    s[0] = std::sqrt(1.0 / (4.0 * static_cast<double>(m)));
    return s;
}

// Pre-scaling for REDFT01 (Y_j = X_0 + 2 sum X_k cos(..)) to realise the
// orthonormal inverse: sqrt(1/m) for k = 0, sqrt(1/(2m)) otherwise.
std::vector<double> inverse_scale(std::size_t m) {
    if (m == 1) {
        return {1.0};
    }
    std::vector<double> s(m, std::sqrt(1.0 / (2.0 * static_cast<double>(m))));
    s[0] = std::sqrt(1.0 / static_cast<double>(m));
    return s;
}

} // namespace

Matrix dct_matrix(std::size_t m) {
    if (m == 0) {
        throw DimensionError("dct_matrix: size must be positive");
    }
    const double md = static_cast<double>(m);
    Matrix d(m, m);
    const double first = std::sqrt(1.0 / md);
    const double rest = std::sqrt(2.0 / md);
    for (std::size_t j = 0; j < m; ++j) {
        d(0, j) = first;
    }
    for (std::size_t i = 1; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double arg = std::numbers::pi * static_cast<double>((2 * j + 1) * i) / (2.0 * md);
            d(i, j) = rest * std::cos(arg);
        }
    }
    return d;
}

struct DctPlan::FftwKernels {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;

    FftwKernels(std::size_t rows, std::size_t cols) {
        // Plans are created in-place on a scratch buffer and later executed
        // through the new-array interface, so FFTW_UNALIGNED is required.
        std::vector<double> scratch(rows * cols, 0.0);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        std::lock_guard lock(planner_mutex());
        if (cols == 1 || rows == 1) {
            const int len = static_cast<int>(rows * cols);
            forward = fftw_plan_r2r_1d(len, scratch.data(), scratch.data(), FFTW_REDFT10, flags);
            inverse = fftw_plan_r2r_1d(len, scratch.data(), scratch.data(), FFTW_REDFT01, flags);
        } else {
            const int r = static_cast<int>(rows);
            const int c = static_cast<int>(cols);
            forward = fftw_plan_r2r_2d(r, c, scratch.data(), scratch.data(), FFTW_REDFT10, FFTW_REDFT10, flags);
            inverse = fftw_plan_r2r_2d(r, c, scratch.data(), scratch.data(), FFTW_REDFT01, FFTW_REDFT01, flags);
        }
        if (forward == nullptr || inverse == nullptr) {
            release();
            throw std::runtime_error("DctPlan: FFTW planning failed");
        }
    }

    FftwKernels(const FftwKernels&) = delete;
    FftwKernels& operator=(const FftwKernels&) = delete;

    ~FftwKernels() {
        std::lock_guard lock(planner_mutex());
        release();
    }

private:
    void release() noexcept {
        if (forward != nullptr) {
            fftw_destroy_plan(forward);
        }
        if (inverse != nullptr) {
            fftw_destroy_plan(inverse);
        }
        forward = inverse = nullptr;
    }
};

DctPlan::DctPlan(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) {
        throw DimensionError("DctPlan: dimensions must be positive");
    }
    basis_rows_ = dct_matrix(rows);
    basis_cols_ = dct_matrix(cols);
    forward_scale_rows_ = forward_scale(rows);
    forward_scale_cols_ = forward_scale(cols);
    inverse_scale_rows_ = inverse_scale(rows);
    inverse_scale_cols_ = inverse_scale(cols);
    if (rows * cols > 1) {
        kernels_ = std::make_shared<const FftwKernels>(rows, cols);
    }
}

void DctPlan::check_shape(const Matrix& m, const char* what) const {
    if (m.rows() != rows_ || m.cols() != cols_) {
        throw DimensionError(std::string(what) + ": expected " + std::to_string(rows_) + "x" +
                             std::to_string(cols_) + ", got " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()));
    }
}

Matrix DctPlan::forward(const Matrix& x) const {
    check_shape(x, "DctPlan::forward");
    Matrix c = x;
    if (!kernels_) {
        return c;
    }
    fftw_execute_r2r(kernels_->forward, c.data(), c.data());
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            c(i, j) *= forward_scale_rows_[i] * forward_scale_cols_[j];
        }
    }
    return c;
}

Matrix DctPlan::inverse(const Matrix& c) const {
    check_shape(c, "DctPlan::inverse");
    Matrix x = c;
    if (!kernels_) {
        return x;
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            x(i, j) *= inverse_scale_rows_[i] * inverse_scale_cols_[j];
        }
    }
    fftw_execute_r2r(kernels_->inverse, x.data(), x.data());
    return x;
}

Matrix DctPlan::forward_direct(const Matrix& x) const {
    check_shape(x, "DctPlan::forward_direct");
    return matmul(matmul(basis_rows_, x), basis_cols_.transposed());
}

Matrix DctPlan::inverse_direct(const Matrix& c) const {
    check_shape(c, "DctPlan::inverse_direct");
    return matmul(matmul(basis_rows_.transposed(), c), basis_cols_);
}

double kron_infnorm(const Matrix& a, const Matrix& b) {
    if (a.empty() || b.empty()) {
        throw DimensionError("kron_infnorm: empty matrix");
    }
    return max_abs(a) * max_abs(b);
}

double dct_infnorm_squared(std::size_t m) {
    if (m <= 1) {
        return 1.0;
    }
    const double md = static_cast<double>(m);
    if (is_power_of_two(m)) {
        const double c = std::cos(std::numbers::pi / (2.0 * md));
        return 2.0 / md * c * c;
    }
    return 2.0 / md;
}

bool is_orthonormal(const Matrix& q, double tol) {
    if (q.rows() != q.cols() || q.empty()) {
        return false;
    }
    const Matrix gram = matmul(q.transposed(), q);
    return max_abs_diff(gram, Matrix::identity(q.rows())) <= tol;
}

double uniqueness_bound(const Matrix& a, const Matrix& b) {
    // B^T (x) A is orthonormal when both factors are.
    if (!is_orthonormal(a) || !is_orthonormal(b)) {
        log_warning("uniqueness_bound: B^T (x) A is not orthonormal; bound is not guaranteed");
    }
    const double coherence = kron_infnorm(a, b);
    if (coherence == 0.0) {
        throw ConfigError("uniqueness_bound: zero coherence");
    }
    return 0.5 * (1.0 + 1.0 / coherence);
}

} // namespace idt
