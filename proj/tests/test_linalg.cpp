#include <doctest.h>

#include "blind_stbc/linalg.hpp"
#include "test_support.hpp"

using namespace blind_stbc;
using blind_stbc::testing::max_abs_diff;
using blind_stbc::testing::random_matrix;

namespace {

constexpr Complex j{0.0, 1.0};

ComplexMatrix naive_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < b.cols(); ++c) {
            Complex sum = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) sum += a(r, k) * b(k, c);
            out(r, c) = sum;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("matmul") {
    const ComplexMatrix m{{1.0 + j, 2.0}, {-3.0, 0.5 * j}};
    CHECK(matmul(ComplexMatrix::identity(2), m) == m);

    const ComplexMatrix swap{{0.0, 1.0}, {1.0, 0.0}};
    CHECK(matmul(ComplexMatrix::identity(2), swap) == swap);

    RngStream rng(101);
    for (int rep = 0; rep < 20; ++rep) {
        const auto a = random_matrix(4, 2, rng);
        const auto b = random_matrix(2, 5, rng);
        CHECK(max_abs_diff(matmul(a, b), naive_product(a, b)) < 1e-14);
    }

    CHECK_THROWS_AS(matmul(ComplexMatrix(2, 3), ComplexMatrix(2, 3)), DimensionError);
}

TEST_CASE("hermitian") {
    const ComplexMatrix sym{{1.0, 2.0}, {2.0, -4.0}};
    CHECK(hermitian(sym) == sym);
    CHECK(hermitian(ComplexMatrix{{j}}) == ComplexMatrix{{-j}});

    RngStream rng(7);
    const auto a = random_matrix(3, 5, rng);
    const auto ah = hermitian(a);
    CHECK(ah.rows() == 5);
    CHECK(ah(4, 2) == std::conj(a(2, 4)));
    CHECK(hermitian(ah) == a);
}

TEST_CASE("frobenius_sq") {
    CHECK(frobenius_sq(ComplexMatrix(3, 3)) == 0.0);
    CHECK(frobenius_sq(ComplexMatrix{{1.0, j}, {-1.0, -j}}) == doctest::Approx(4.0));

    RngStream rng(9);
    for (int rep = 0; rep < 10; ++rep) {
        const auto a = random_matrix(6, 3, rng);
        double oracle = 0.0;
        for (std::size_t r = 0; r < 6; ++r) {
            for (std::size_t c = 0; c < 3; ++c) {
                oracle += a(r, c).real() * a(r, c).real() + a(r, c).imag() * a(r, c).imag();
            }
        }
        CHECK(frobenius_sq(a) == doctest::Approx(oracle).epsilon(1e-14));
        CHECK(frobenius_sq(hermitian(a)) == doctest::Approx(frobenius_sq(a)).epsilon(1e-15));
    }
}

TEST_CASE("solve_normal_eq: identity and consistent systems") {
    RngStream rng(33);
    const auto b = random_matrix(2, 4, rng);
    CHECK(max_abs_diff(solve_normal_eq(ComplexMatrix::identity(2), b), b) < 1e-15);

    for (int rep = 0; rep < 50; ++rep) {
        const auto a = random_matrix(8, 2, rng);
        const auto x0 = random_matrix(2, 3, rng);
        CHECK(max_abs_diff(solve_normal_eq(a, matmul(a, x0)), x0) < 1e-12);
    }

    const auto col = random_matrix(5, 1, rng);
    const auto x1 = random_matrix(1, 2, rng);
    CHECK(max_abs_diff(solve_normal_eq(col, matmul(col, x1)), x1) < 1e-12);
}

TEST_CASE("solve_normal_eq: residual orthogonal to the column space") {
    RngStream rng(44);
    for (int rep = 0; rep < 200; ++rep) {
        const auto a = random_matrix(4 + rep % 20, 2, rng);
        const auto b = random_matrix(a.rows(), 1 + rep % 7, rng);
        const auto x = solve_normal_eq(a, b);
        const auto r = b - matmul(a, x);
        CHECK(std::sqrt(frobenius_sq(matmul(hermitian(a), r))) <=
              1e-9 * std::sqrt(frobenius_sq(b)));
    }
}

TEST_CASE("solve_normal_eq: minimal against random perturbations") {
    RngStream rng(55);
    for (int rep = 0; rep < 20; ++rep) {
        const auto a = random_matrix(6, 2, rng);
        const auto b = random_matrix(6, 3, rng);
        const auto x = solve_normal_eq(a, b);
        const double best = frobenius_sq(b - matmul(a, x));
        for (int k = 0; k < 100; ++k) {
            auto alt = x;
            alt += (0.01 * (1 + k % 10)) * random_matrix(2, 3, rng);
            CHECK(frobenius_sq(b - matmul(a, alt)) >= best);
        }
    }
}

TEST_CASE("solve_normal_eq: errors") {
    CHECK_THROWS_AS(solve_normal_eq(ComplexMatrix(4, 2), ComplexMatrix(4, 1)), SingularError);
    const ComplexMatrix rank_one{{1.0, 2.0}, {2.0, 4.0}, {j, 2.0 * j}};
    CHECK_THROWS_AS(solve_normal_eq(rank_one, ComplexMatrix(3, 1)), SingularError);
    CHECK_THROWS_AS(solve_normal_eq(ComplexMatrix(4, 2), ComplexMatrix(3, 1)), DimensionError);
    CHECK_THROWS_AS(solve_normal_eq(ComplexMatrix(4, 3), ComplexMatrix(4, 1)), DimensionError);
}

TEST_CASE("operations are pure") {
    RngStream rng(66);
    const auto a = random_matrix(10, 2, rng);
    const auto b = random_matrix(10, 4, rng);
    const auto first = solve_normal_eq(a, b);
    const auto second = solve_normal_eq(a, b);
    CHECK(first == second);
    CHECK(matmul(hermitian(a), b) == matmul(hermitian(a), b));
}

TEST_CASE("constructor validates entry count") {
    CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<Complex>(3)), DimensionError);
    CHECK_THROWS_AS((ComplexMatrix{{1.0, 2.0}, {3.0}}), DimensionError);
}
