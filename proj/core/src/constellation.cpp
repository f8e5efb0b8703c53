#include "blind_stbc/constellation.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace blind_stbc {

namespace {

constexpr Complex kJ{0.0, 1.0};

// Per-axis Gray code for the 4-level PAM of 16-QAM: -3 -1 +1 +3 -> 00 01 11 10.
constexpr std::array<double, 4> kPam4ByGray{-3.0, -1.0, 3.0, 1.0};

std::vector<Complex> qpsk_points() {
    const double a = 1.0 / std::sqrt(2.0);
    std::vector<Complex> pts;
    for (std::uint32_t label = 0; label < 4; ++label) {
        const double re = (label & 0b10) ? -a : a;
        const double im = (label & 0b01) ? -a : a;
        pts.emplace_back(re, im);
    }
    return pts;
}

std::vector<Complex> qam16_points() {
    const double scale = 1.0 / std::sqrt(10.0);
    std::vector<Complex> pts;
    for (std::uint32_t label = 0; label < 16; ++label) {
        pts.emplace_back(scale * kPam4ByGray[label >> 2], scale * kPam4ByGray[label & 0b11]);
    }
    return pts;
}

}  // namespace

Modulation parse_modulation(std::string_view name) {
    if (name == "bpsk") return Modulation::bpsk;
    if (name == "qpsk") return Modulation::qpsk;
    if (name == "16qam") return Modulation::qam16;
    throw std::invalid_argument("unknown modulation '" + std::string(name) +
                                "' (expected bpsk, qpsk or 16qam)");
}

std::string_view modulation_name(Modulation m) noexcept {
    switch (m) {
        case Modulation::bpsk: return "bpsk";
        case Modulation::qpsk: return "qpsk";
        case Modulation::qam16: return "16qam";
    }
    return "?";
}

Constellation::Constellation(Modulation m, std::vector<Complex> points, unsigned bits,
                             std::vector<Complex> rotations)
    : modulation_(m),
      points_(std::move(points)),
      bits_per_symbol_(bits),
      rotations_(std::move(rotations)) {}

const Constellation& Constellation::get(Modulation m) {
    static const Constellation bpsk(Modulation::bpsk, {1.0, -1.0}, 1, {1.0, -1.0});
    static const Constellation qpsk(Modulation::qpsk, qpsk_points(), 2, {1.0, kJ, -1.0, -kJ});
    static const Constellation qam16(Modulation::qam16, qam16_points(), 4, {1.0, kJ, -1.0, -kJ});
    switch (m) {
        case Modulation::bpsk: return bpsk;
        case Modulation::qpsk: return qpsk;
        case Modulation::qam16: return qam16;
    }
    throw std::invalid_argument("unknown modulation");
}

std::size_t Constellation::slice_index(Complex x) const noexcept {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double d = std::norm(x - points_[i]);
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

ComplexMatrix slice_matrix(const ComplexMatrix& x, const Constellation& c) {
    ComplexMatrix out = x;
    for (auto& e : out.entries()) {
        e = c.slice(e);
    }
    return out;
}

std::vector<Complex> random_symbols(std::size_t count, const Constellation& c, RngStream& rng) {
    std::vector<Complex> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(c.points()[rng.uniform_index(c.size())]);
    }
    return out;
}

ComplexMatrix random_symbol_matrix(std::size_t blocks, const Constellation& c, RngStream& rng) {
    const auto draws = random_symbols(2 * blocks, c, rng);
    ComplexMatrix s(2, blocks);
    for (std::size_t n = 0; n < blocks; ++n) {
        s(0, n) = draws[2 * n];
        s(1, n) = draws[2 * n + 1];
    }
    return s;
}

std::vector<ComplexMatrix> ambiguity_transforms(const Constellation& c) {
    std::vector<ComplexMatrix> out;
    const auto rotations = c.symmetry_rotations();
    // q = (rho, 0): s1 -> rho s1, s2 -> conj(rho) s2.
    for (const Complex rho : rotations) {
        out.push_back(ComplexMatrix{{rho, 0.0}, {0.0, std::conj(rho)}});
    }
    // q = (0, rho): s1 -> -conj(rho) s2, s2 -> rho s1.
    for (const Complex rho : rotations) {
        out.push_back(ComplexMatrix{{0.0, -std::conj(rho)}, {rho, 0.0}});
    }
    return out;
}

ErrorCount count_errors(const ComplexMatrix& detected, const ComplexMatrix& truth,
                        const Constellation& c) {
    if (detected.rows() != truth.rows() || detected.cols() != truth.cols()) {
        throw DimensionError("count_errors: shape mismatch");
    }
    ErrorCount count;
    const auto d = detected.entries();
    const auto t = truth.entries();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const std::size_t di = c.slice_index(d[i]);
        const std::size_t ti = c.slice_index(t[i]);
        if (di != ti) {
            ++count.symbols;
            count.bits += static_cast<std::size_t>(std::popcount(c.label(di) ^ c.label(ti)));
        }
    }
    return count;
}

AlignedErrors best_rotation_errors(const ComplexMatrix& detected, const ComplexMatrix& truth,
                                   const Constellation& c) {
    if (detected.rows() != 2 || detected.rows() != truth.rows() ||
        detected.cols() != truth.cols()) {
        throw DimensionError("best_rotation_errors: expected matching 2xN matrices");
    }
    std::optional<AlignedErrors> best;
    for (auto& m : ambiguity_transforms(c)) {
        const ErrorCount e = count_errors(slice_matrix(matmul(m, detected), c), truth, c);
        if (!best || e.symbols < best->errors.symbols) {
            best = AlignedErrors{std::move(m), e};
            if (e.symbols == 0) break;
        }
    }
    return *best;
}

}  // namespace blind_stbc
