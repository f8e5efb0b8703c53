#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "blind_stbc/linalg.hpp"
#include "blind_stbc/random.hpp"

namespace blind_stbc {

enum class Modulation { bpsk, qpsk, qam16 };

/// Parses the CLI spelling: "bpsk", "qpsk" or "16qam".
Modulation parse_modulation(std::string_view name);
std::string_view modulation_name(Modulation m) noexcept;

/// Unit-average-energy symbol alphabet with Gray bit labels.
///
/// Points are stored in label order, so `points()[i]` carries bit label `i`.
class Constellation {
public:
    static const Constellation& get(Modulation m);

    Modulation modulation() const noexcept { return modulation_; }
    std::string_view name() const noexcept { return modulation_name(modulation_); }
    std::span<const Complex> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    unsigned bits_per_symbol() const noexcept { return bits_per_symbol_; }

    /// Unit-modulus scalars rho with rho * A = A.
    std::span<const Complex> symmetry_rotations() const noexcept { return rotations_; }

    /// Index of the nearest point; ties go to the lowest index.
    std::size_t slice_index(Complex x) const noexcept;
    Complex slice(Complex x) const noexcept { return points_[slice_index(x)]; }

    /// Bit label of point `index`.
    std::uint32_t label(std::size_t index) const noexcept { return static_cast<std::uint32_t>(index); }

private:
    Constellation(Modulation m, std::vector<Complex> points, unsigned bits,
                  std::vector<Complex> rotations);

    Modulation modulation_;
    std::vector<Complex> points_;
    unsigned bits_per_symbol_;
    std::vector<Complex> rotations_;
};

ComplexMatrix slice_matrix(const ComplexMatrix& x, const Constellation& c);

/// `count` i.i.d. uniform draws from the alphabet.
std::vector<Complex> random_symbols(std::size_t count, const Constellation& c, RngStream& rng);

/// 2 x blocks symbol matrix filled column by column with random_symbols.
ComplexMatrix random_symbol_matrix(std::size_t blocks, const Constellation& c, RngStream& rng);

/// 2x2 transforms M such that (M S, G') reproduces the received signal of (S, G)
/// for a suitable G'. They are the right-multiplications of each Alamouti block by
/// a unit "quaternion" q = (q1, q2), i.e. M = [[q1, -conj(q2)], [q2, conj(q1)]],
/// restricted to the q that keep the alphabet closed. The identity comes first.
std::vector<ComplexMatrix> ambiguity_transforms(const Constellation& c);

struct ErrorCount {
    std::size_t symbols = 0;
    std::size_t bits = 0;
};

/// Raw symbol/bit mismatches between two alphabet-valued matrices of equal shape.
ErrorCount count_errors(const ComplexMatrix& detected, const ComplexMatrix& truth,
                        const Constellation& c);

struct AlignedErrors {
    ComplexMatrix transform;
    ErrorCount errors;
};

/// Aligns a blind estimate to the truth over ambiguity_transforms(c) and returns
/// the transform with the fewest symbol errors (first one wins ties).
AlignedErrors best_rotation_errors(const ComplexMatrix& detected, const ComplexMatrix& truth,
                                   const Constellation& c);

}  // namespace blind_stbc
