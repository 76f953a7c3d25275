#include "idt/noise.hpp"

#include "idt/transforms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace idt {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError(std::string("NoiseSpec: ") + what + " must lie in [0, 1]");
    }
}

CorruptedInstance begin_instance(const Matrix& x, const NoiseSpec& spec) {
    return {x, x, Matrix(x.rows(), x.cols()), spec};
}

} // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t state = seed;
    for (auto& word : s_) {
        word = splitmix64(state);
    }
}

std::uint64_t Rng::next() noexcept {
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
}

double Rng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

double Rng::normal() noexcept {
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
        const std::uint64_t r = next();
        if (r >= limit) {
            return r % bound;
        }
    }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    std::uint64_t state = master ^ (index * 0xD1B54A32D192ED03ULL);
    splitmix64(state);
    return splitmix64(state);
}

std::string to_string(NoiseKind kind) {
    switch (kind) {
    case NoiseKind::SPN: return "spn";
    case NoiseKind::RVIN: return "rvin";
    case NoiseKind::Mixed: return "mixed";
    case NoiseKind::Missing: return "missing";
    }
    return "unknown";
}

void NoiseSpec::validate() const {
    check_probability(density, "density");
    check_probability(salt_fraction, "salt_fraction");
    check_probability(spn_density, "spn_density");
    check_probability(rvin_density, "rvin_density");
    if (kind == NoiseKind::Mixed && spn_density + rvin_density > 1.0) {
        throw ConfigError("NoiseSpec: spn_density + rvin_density exceeds 1");
    }
    if (!(value_lo <= value_hi)) {
        throw ConfigError("NoiseSpec: value range requires lo <= hi");
    }
}

CorruptedInstance add_spn(const Matrix& x, const NoiseSpec& spec) {
    spec.validate();
    auto inst = begin_instance(x, spec);
    Rng rng(spec.seed);
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double u = rng.uniform();
        const double salt = rng.uniform();
        if (u < spec.density) {
            inst.y[k] = salt < spec.salt_fraction ? spec.value_hi : spec.value_lo;
            inst.mask[k] = 1.0;
        }
    }
    return inst;
}

CorruptedInstance add_rvin(const Matrix& x, const NoiseSpec& spec) {
    spec.validate();
    auto inst = begin_instance(x, spec);
    Rng rng(spec.seed);
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double u = rng.uniform();
        const double v = rng.uniform(spec.value_lo, spec.value_hi);
        if (u < spec.density) {
            inst.y[k] = v;
            inst.mask[k] = 1.0;
        }
    }
    return inst;
}

CorruptedInstance add_mixed(const Matrix& x, const NoiseSpec& spec) {
    spec.validate();
    auto inst = begin_instance(x, spec);
    Rng rng(spec.seed);
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double u = rng.uniform();
        const double salt = rng.uniform();
        const double v = rng.uniform(spec.value_lo, spec.value_hi);
        if (u < spec.spn_density) {
            inst.y[k] = salt < spec.salt_fraction ? spec.value_hi : spec.value_lo;
            inst.mask[k] = 1.0;
        } else if (u < spec.spn_density + spec.rvin_density) {
            inst.y[k] = v;
            inst.mask[k] = 1.0;
        }
    }
    return inst;
}

CorruptedInstance add_missing(const Matrix& x, const NoiseSpec& spec) {
    NoiseSpec s = spec;
    s.salt_fraction = 0.0;
    auto inst = add_spn(x, s);
    inst.spec = spec;
    return inst;
}

CorruptedInstance add_noise(const Matrix& x, const NoiseSpec& spec) {
    switch (spec.kind) {
    case NoiseKind::SPN: return add_spn(x, spec);
    case NoiseKind::RVIN: return add_rvin(x, spec);
    case NoiseKind::Mixed: return add_mixed(x, spec);
    case NoiseKind::Missing: return add_missing(x, spec);
    }
    throw ConfigError("add_noise: unknown noise kind");
}

namespace {

// Partial Fisher-Yates: `count` distinct positions out of `total`.
std::vector<std::size_t> sample_positions(std::size_t total, std::size_t count, Rng& rng) {
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(total - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(count);
    return idx;
}

Matrix sparse_gaussian(std::size_t m, std::size_t n, double rho, double stddev, Rng& rng) {
    Matrix out(m, n);
    const auto count = static_cast<std::size_t>(std::llround(rho * static_cast<double>(m * n)));
    for (std::size_t pos : sample_positions(m * n, count, rng)) {
        double v = 0.0;
        while (v == 0.0) {
            v = stddev * rng.normal();
        }
        out[pos] = v;
    }
    return out;
}

} // namespace

SyntheticPair gen_synthetic_pair(std::size_t m, std::size_t n, double rho_x, double rho_n, double variance,
                                 std::uint64_t seed) {
    check_probability(rho_x, "rho_x");
    check_probability(rho_n, "rho_n");
    if (!(variance >= 0.0)) {
        throw ConfigError("gen_synthetic_pair: variance must be nonnegative");
    }
    if (m == 0 || n == 0) {
        throw DimensionError("gen_synthetic_pair: dimensions must be positive");
    }
    Rng rng(seed);
    const double sd = std::sqrt(variance);
    SyntheticPair p;
    p.x0 = sparse_gaussian(m, n, rho_x, sd, rng);
    p.n0 = sparse_gaussian(m, n, rho_n, sd, rng);
    const DctPlan plan(m, n);
    p.y = plan.inverse(p.x0) + p.n0;
    return p;
}

Matrix gen_test_image(std::size_t m, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    Matrix img(m, n);

    const double base = rng.uniform(90.0, 150.0);
    const double gi = rng.uniform(-50.0, 50.0);
    const double gj = rng.uniform(-50.0, 50.0);

    struct Wave {
        double fi, fj, phase, amp;
    };
    std::vector<Wave> waves;
    for (int w = 0; w < 4; ++w) {
        waves.push_back({rng.uniform(0.5, 4.0), rng.uniform(0.5, 4.0), rng.uniform(0.0, 2.0 * std::numbers::pi),
                         rng.uniform(4.0, 12.0)});
    }

    struct Shape {
        double ci, cj, ri, rj, level;
        bool box;
    };
    std::vector<Shape> shapes;
    for (int s = 0; s < 10; ++s) {
        shapes.push_back({rng.uniform(0.1, 0.9) * md, rng.uniform(0.1, 0.9) * nd, rng.uniform(0.05, 0.22) * md,
                          rng.uniform(0.05, 0.22) * nd, rng.uniform(-70.0, 70.0), rng.uniform() < 0.4});
    }

    // fine texture confined to a band
    const double band_lo = rng.uniform(0.2, 0.5) * md;
    const double band_hi = band_lo + 0.25 * md;
    const double tex_f = rng.uniform(0.15, 0.35);

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double u = static_cast<double>(i);
            const double v = static_cast<double>(j);
            double val = base + gi * u / md + gj * v / nd;
            for (const auto& w : waves) {
                val += w.amp * std::sin(2.0 * std::numbers::pi * (w.fi * u / md + w.fj * v / nd) + w.phase);
            }
            for (const auto& s : shapes) {
                const double du = (u - s.ci) / s.ri;
                const double dv = (v - s.cj) / s.rj;
                // signed distance in pixels, approximately
                const double r = s.box ? std::max(std::abs(du), std::abs(dv)) : std::sqrt(du * du + dv * dv);
                const double dist = (r - 1.0) * std::min(s.ri, s.rj);
                const double inside = 0.5 * (1.0 - std::tanh(dist / 0.8));
                val += s.level * inside;
            }
            if (u >= band_lo && u < band_hi) {
                val += 6.0 * std::sin(tex_f * 2.0 * std::numbers::pi * u) * std::cos(tex_f * 1.7 * std::numbers::pi * v);
            }
            img(i, j) = std::clamp(val, 5.0, 250.0);
        }
    }
    return img;
}

} // namespace idt
