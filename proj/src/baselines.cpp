#include "idt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace idt {

namespace {

struct Grid {
    const Matrix& m;
    std::ptrdiff_t rows;
    std::ptrdiff_t cols;

    explicit Grid(const Matrix& mat)
        : m(mat), rows(static_cast<std::ptrdiff_t>(mat.rows())), cols(static_cast<std::ptrdiff_t>(mat.cols())) {}

    [[nodiscard]] bool is_vector() const { return rows == 1 || cols == 1; }

    // replicate-padded access
    [[nodiscard]] double at(std::ptrdiff_t i, std::ptrdiff_t j) const {
        i = std::clamp<std::ptrdiff_t>(i, 0, rows - 1);
        j = std::clamp<std::ptrdiff_t>(j, 0, cols - 1);
        return m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }

    // replicate-padded access along a flattened vector
    [[nodiscard]] double at(std::ptrdiff_t k) const {
        k = std::clamp<std::ptrdiff_t>(k, 0, rows * cols - 1);
        return m[static_cast<std::size_t>(k)];
    }

    // Window of odd side `w` centred on flat index (i, j); for vectors a
    // run of w samples along the signal.
    void gather(std::ptrdiff_t i, std::ptrdiff_t j, int w, std::vector<double>& out) const {
        out.clear();
        const std::ptrdiff_t r = w / 2;
        if (is_vector()) {
            const std::ptrdiff_t k = i * cols + j;
            for (std::ptrdiff_t t = -r; t <= r; ++t) {
                out.push_back(at(k + t));
            }
            return;
        }
        for (std::ptrdiff_t di = -r; di <= r; ++di) {
            for (std::ptrdiff_t dj = -r; dj <= r; ++dj) {
                out.push_back(at(i + di, j + dj));
            }
        }
    }
};

double median_in_place(std::vector<double>& v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

} // namespace

Matrix amf(const Matrix& y, int max_window) {
    if (max_window < 3 || max_window % 2 == 0) {
        throw ConfigError("amf: max_window must be odd and >= 3");
    }
    Matrix out(y.rows(), y.cols());
    if (y.empty()) {
        return out;
    }
    const Grid g(y);
    std::vector<double> win;
    for (std::ptrdiff_t i = 0; i < g.rows; ++i) {
        for (std::ptrdiff_t j = 0; j < g.cols; ++j) {
            const double z = g.at(i, j);
            double result = z;
            for (int w = 3; w <= max_window; w += 2) {
                g.gather(i, j, w, win);
                const auto [lo, hi] = std::minmax_element(win.begin(), win.end());
                const double zmin = *lo;
                const double zmax = *hi;
                const double zmed = median_in_place(win);
                if (zmin < zmed && zmed < zmax) {
                    result = (zmin < z && z < zmax) ? z : zmed;
                    break;
                }
                result = zmed;
            }
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = result;
        }
    }
    return out;
}

Matrix acwmf(const Matrix& y, const AcwmfOptions& opts) {
    Matrix out(y.rows(), y.cols());
    if (y.empty()) {
        return out;
    }
    const Grid g(y);
    std::vector<double> win;
    std::vector<double> neighbors;
    std::vector<double> dev;
    for (std::ptrdiff_t i = 0; i < g.rows; ++i) {
        for (std::ptrdiff_t j = 0; j < g.cols; ++j) {
            const double x = g.at(i, j);
            if (g.is_vector()) {
                g.gather(i, j, 9, win);
            } else {
                g.gather(i, j, 3, win);
            }
            // win has 9 entries with the center at index 4
            neighbors.assign(win.begin(), win.end());
            neighbors.erase(neighbors.begin() + 4);
            std::sort(neighbors.begin(), neighbors.end());

            const double med = std::clamp(x, neighbors[3], neighbors[4]);
            dev.clear();
            for (double v : win) {
                dev.push_back(std::abs(v - med));
            }
            const double mad = median_in_place(dev);

            // The center-weighted median with weight 2k+1 over 8 sorted
            // neighbors a[0..7] is clamp(x, a[3-k], a[4+k]).
            bool impulse = false;
            for (std::size_t k = 0; k < 4 && !impulse; ++k) {
                const double cwm = std::clamp(x, neighbors[3 - k], neighbors[4 + k]);
                impulse = std::abs(cwm - x) > opts.s * mad + opts.deltas[k];
            }
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = impulse ? med : x;
        }
    }
    return out;
}

} // namespace idt
