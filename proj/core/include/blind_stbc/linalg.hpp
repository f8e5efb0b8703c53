#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace blind_stbc {

using Complex = std::complex<double>;

/// Raised when operand shapes are incompatible.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a normal-equation system has a (numerically) singular Gram matrix.
class SingularError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Threshold on |det(A^H A)| / trace(A^H A)^2 below which a Gram matrix is singular.
inline constexpr double kSingularTolerance = 1e-12;

/// Dense row-major complex matrix. Sizes in this project never exceed 2N x 2,
/// so every operation copies; there are no views.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    Complex& operator()(std::size_t r, std::size_t c) noexcept { return entries_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const noexcept {
        return entries_[r * cols_ + c];
    }

    std::span<Complex> entries() noexcept { return entries_; }
    std::span<const Complex> entries() const noexcept { return entries_; }

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scale) noexcept;

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scale, ComplexMatrix a);

/// Standard matrix product. Throws DimensionError if a.cols() != b.rows().
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

/// Conjugate transpose.
ComplexMatrix hermitian(const ComplexMatrix& a);

/// Elementwise conjugate.
ComplexMatrix conjugate(const ComplexMatrix& a);

ComplexMatrix transpose(const ComplexMatrix& a);

/// Sum of squared moduli of all entries.
double frobenius_sq(const ComplexMatrix& a) noexcept;

/// Least-squares solution X of min ||b - a X||_F^2 via the normal equations
/// (a^H a) X = a^H b. `a` must have one or two columns; the 2x2 Gram matrix is
/// inverted in closed form through its adjugate.
ComplexMatrix solve_normal_eq(const ComplexMatrix& a, const ComplexMatrix& b);

/// Inverse of a 2x2 Hermitian positive-definite matrix (closed form).
/// Throws SingularError under the same scaled-determinant test as solve_normal_eq.
ComplexMatrix inverse_hermitian_2x2(const ComplexMatrix& gram);

}  // namespace blind_stbc
