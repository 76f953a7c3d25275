#pragma once

#include "idt/matrix.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace idt {

/// xoshiro256** seeded through splitmix64. Chosen over the standard engines
/// because the generated stream, and every distribution built on it below,
/// is fully specified here and therefore identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept;
    /// Standard normal via the Box-Muller transform (no cached second value).
    double normal() noexcept;
    /// Uniform integer in [0, bound), bound > 0, by rejection.
    std::uint64_t below(std::uint64_t bound) noexcept;

private:
    std::array<std::uint64_t, 4> s_{};
};

/// Deterministic per-trial seed derived from a master seed.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

enum class NoiseKind { SPN, RVIN, Mixed, Missing };

[[nodiscard]] std::string to_string(NoiseKind kind);

struct NoiseSpec {
    NoiseKind kind = NoiseKind::SPN;
    /// Corruption probability per entry (SPN, RVIN, MISSING).
    double density = 0.0;
    /// Probability that a corrupted SPN entry becomes `value_hi`.
    double salt_fraction = 0.5;
    double value_lo = 0.0;
    double value_hi = 255.0;
    /// MIXED only; both are fractions of all entries.
    double spn_density = 0.0;
    double rvin_density = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct CorruptedInstance {
    Matrix y;
    Matrix ground_truth;
    /// 1 where an entry was corrupted, 0 elsewhere.
    Matrix mask;
    NoiseSpec spec;
};

/// Each entry independently becomes value_hi (probability salt_fraction) or
/// value_lo with probability `density`.
[[nodiscard]] CorruptedInstance add_spn(const Matrix& x, const NoiseSpec& spec);
/// Corrupted entries are replaced by uniform draws on [value_lo, value_hi].
[[nodiscard]] CorruptedInstance add_rvin(const Matrix& x, const NoiseSpec& spec);
/// Disjoint SPN and RVIN corruption of spn_density and rvin_density of all entries.
[[nodiscard]] CorruptedInstance add_mixed(const Matrix& x, const NoiseSpec& spec);
/// Missing samples read as value_lo: SPN with no salt.
[[nodiscard]] CorruptedInstance add_missing(const Matrix& x, const NoiseSpec& spec);
/// Dispatches on spec.kind.
[[nodiscard]] CorruptedInstance add_noise(const Matrix& x, const NoiseSpec& spec);

struct SyntheticPair {
    Matrix x0;  ///< transform-domain coefficients
    Matrix n0;  ///< observation-domain noise
    Matrix y;   ///< inverse(x0) + n0
};

/// X0 and N0 get exactly round(rho * m * n) nonzeros each, at uniformly
/// random positions, drawn from Normal(0, variance). `variance` is a
/// variance, not a standard deviation.
[[nodiscard]] SyntheticPair gen_synthetic_pair(std::size_t m, std::size_t n, double rho_x, double rho_n,
                                               double variance, std::uint64_t seed);

/// Seeded piecewise-smooth 8-bit-range test image (gradients, soft-edged
/// shapes and low-frequency texture), used where no natural image is at hand.
[[nodiscard]] Matrix gen_test_image(std::size_t m, std::size_t n, std::uint64_t seed);

} // namespace idt
