#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>

namespace blind_stbc {

/// Tags that separate independent substreams drawn for the same trial.
enum class StreamPurpose : std::uint64_t {
    channel = 1,
    symbols = 2,
    noise = 3,
    ils_init = 4,
    eils = 5,
    histogram_run = 6,
};

/// Seeded random stream backed by a 64-bit Mersenne Twister (period 2^19937 - 1).
///
/// Substreams are derived by feeding (seed, trial, purpose) through std::seed_seq,
/// so a trial's draws depend only on those three values and never on the order
/// in which trials are executed. Gaussian deviates use the Marsaglia polar method
/// on uniform variates in (-1, 1); the second deviate of each pair is cached.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);
    RngStream(std::uint64_t seed, std::uint64_t trial, StreamPurpose purpose);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, n).
    std::size_t uniform_index(std::size_t n);

    double standard_normal();

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_gaussian(double variance);

private:
    std::mt19937_64 engine_;
    std::optional<double> cached_normal_;
};

}  // namespace blind_stbc
