#include "blind_stbc/linalg.hpp"

#include <cmath>
#include <string>

namespace blind_stbc {

namespace {

std::string shape(const ComplexMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(op) + ": shape mismatch " + shape(a) + " vs " + shape(b));
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw DimensionError("ComplexMatrix: " + std::to_string(entries_.size()) +
                             " entries cannot fill " + shape(*this));
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw DimensionError("ComplexMatrix: ragged initializer");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator+=");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] += other.entries_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator-=");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] -= other.entries_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) noexcept {
    for (auto& e : entries_) {
        e *= scale;
    }
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scale, ComplexMatrix a) { return a *= scale; }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: " + shape(a) + " * " + shape(b));
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

ComplexMatrix hermitian(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(j, i) = std::conj(a(i, j));
        }
    }
    return out;
}

ComplexMatrix conjugate(const ComplexMatrix& a) {
    ComplexMatrix out = a;
    for (auto& e : out.entries()) {
        e = std::conj(e);
    }
    return out;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(j, i) = a(i, j);
        }
    }
    return out;
}

double frobenius_sq(const ComplexMatrix& a) noexcept {
    double sum = 0.0;
    for (const auto& e : a.entries()) {
        sum += std::norm(e);
    }
    return sum;
}

ComplexMatrix inverse_hermitian_2x2(const ComplexMatrix& gram) {
    if (gram.rows() != 2 || gram.cols() != 2) {
        throw DimensionError("inverse_hermitian_2x2: expected 2x2, got " + shape(gram));
    }
    // Diagonal of a Hermitian matrix is real; off-diagonals are conjugates.
    const double g00 = gram(0, 0).real();
    const double g11 = gram(1, 1).real();
    const Complex g01 = gram(0, 1);
    const double det = g00 * g11 - std::norm(g01);
    const double trace = g00 + g11;
    if (!(trace > 0.0) || std::abs(det) < kSingularTolerance * trace * trace) {
        throw SingularError("Gram matrix is singular (det=" + std::to_string(det) + ")");
    }
    const double inv_det = 1.0 / det;
    return ComplexMatrix(2, 2,
                         {g11 * inv_det, -g01 * inv_det, -std::conj(g01) * inv_det, g00 * inv_det});
}

ComplexMatrix solve_normal_eq(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows()) {
        throw DimensionError("solve_normal_eq: row mismatch " + shape(a) + " vs " + shape(b));
    }
    const std::size_t m = a.rows();
    const std::size_t k = b.cols();

    if (a.cols() == 1) {
        double gram = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            gram += std::norm(a(i, 0));
        }
        if (!(gram > 0.0)) {
            throw SingularError("solve_normal_eq: zero column");
        }
        ComplexMatrix x(1, k);
        for (std::size_t i = 0; i < m; ++i) {
            const Complex ai = std::conj(a(i, 0));
            for (std::size_t j = 0; j < k; ++j) {
                x(0, j) += ai * b(i, j);
            }
        }
        return (1.0 / gram) * std::move(x);
    }
    if (a.cols() != 2) {
        throw DimensionError("solve_normal_eq: only 1- or 2-column systems are supported, got " +
                             shape(a));
    }

    // Gram = a^H a and rhs = a^H b, formed without materialising a^H.
    ComplexMatrix gram(2, 2);
    ComplexMatrix rhs(2, k);
    for (std::size_t i = 0; i < m; ++i) {
        const Complex c0 = std::conj(a(i, 0));
        const Complex c1 = std::conj(a(i, 1));
        gram(0, 0) += c0 * a(i, 0);
        gram(0, 1) += c0 * a(i, 1);
        gram(1, 1) += c1 * a(i, 1);
        for (std::size_t j = 0; j < k; ++j) {
            rhs(0, j) += c0 * b(i, j);
            rhs(1, j) += c1 * b(i, j);
        }
    }
    gram(1, 0) = std::conj(gram(0, 1));
    return matmul(inverse_hermitian_2x2(gram), rhs);
}

}  // namespace blind_stbc
