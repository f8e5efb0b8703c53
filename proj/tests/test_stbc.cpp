#include <doctest.h>

#include "blind_stbc/stbc.hpp"
#include "test_support.hpp"

using namespace blind_stbc;
using blind_stbc::testing::max_abs_diff;
using blind_stbc::testing::random_matrix;

namespace {

double trace_real(const ComplexMatrix& m) {
    double t = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i).real();
    return t;
}

}  // namespace

TEST_CASE("encode_block") {
    CHECK(encode_block({1.0, -1.0}) == ComplexMatrix{{1.0, -1.0}, {1.0, 1.0}});
    CHECK(encode_block({0.0, 0.0}) == ComplexMatrix(2, 2));

    const auto& qpsk = Constellation::get(Modulation::qpsk);
    RngStream rng(3);
    for (int k = 0; k < 100; ++k) {
        const auto s = random_symbols(2, qpsk, rng);
        const auto c = encode_block({s[0], s[1]});
        const double energy = std::norm(s[0]) + std::norm(s[1]);
        CHECK(max_abs_diff(matmul(hermitian(c), c), energy * ComplexMatrix::identity(2)) < 1e-14);
    }
}

TEST_CASE("stack_codes") {
    const ComplexMatrix single{{0.5}, {-2.0}};
    CHECK(stack_codes(single) == encode_block({0.5, -2.0}));

    const ComplexMatrix s{{1.0, 1.0}, {1.0, -1.0}};
    CHECK(stack_codes(s) == ComplexMatrix{{1.0, 1.0}, {-1.0, 1.0}, {1.0, -1.0}, {1.0, 1.0}});

    RngStream rng(4);
    for (int k = 0; k < 50; ++k) {
        const auto sym = random_matrix(2, 1 + k % 9, rng);
        const auto c = stack_codes(sym);
        const double energy = frobenius_sq(sym);
        CHECK(max_abs_diff(matmul(hermitian(c), c), energy * ComplexMatrix::identity(2)) <
              1e-12 * (1 + energy));
    }
}

TEST_CASE("equivalent_channel") {
    CHECK(equivalent_channel(ComplexMatrix::identity(2)) ==
          ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}, {0.0, 1.0}, {1.0, 0.0}});
    CHECK(equivalent_channel(ComplexMatrix(2, 2)) == ComplexMatrix(4, 2));

    RngStream rng(5);
    for (int k = 0; k < 1000; ++k) {
        const auto g = random_matrix(2, 2, rng);
        const auto h = equivalent_channel(g);
        const double tr = trace_real(matmul(hermitian(g), g));
        CHECK(std::sqrt(frobenius_sq(matmul(hermitian(h), h) - tr * ComplexMatrix::identity(2))) <=
              1e-12 * (1 + tr));
    }
}

TEST_CASE("stack_received") {
    // Single noiseless block, G = I, s = (1, 1), sqrt(P/2) = 1.
    const auto y1 = matmul(encode_block({1.0, 1.0}), ComplexMatrix::identity(2));
    const std::vector<ComplexMatrix> blocks{y1};
    const auto rx = stack_received(blocks);
    CHECK(rx.stacked == y1);
    // Slot-2 sample of antenna 1 is -conj(s2) h11 + conj(s1) h21 = -1, so its conjugate is -1.
    CHECK(rx.equivalent == ComplexMatrix{{1.0}, {-1.0}, {1.0}, {1.0}});

    const std::vector<ComplexMatrix> zeros(3, ComplexMatrix(2, 2));
    const auto rz = stack_received(zeros);
    CHECK(rz.equivalent == ComplexMatrix(4, 3));
    CHECK(rz.stacked == ComplexMatrix(6, 2));

    CHECK_THROWS_AS(stack_received(std::span<const ComplexMatrix>{}), DimensionError);
}

TEST_CASE("representations carry the same energy and round-trip exactly") {
    RngStream rng(6);
    for (int k = 0; k < 100; ++k) {
        const auto stacked = random_matrix(2 * (1 + k % 12), 2, rng);
        const auto y = equivalent_from_stacked(stacked);
        CHECK(frobenius_sq(y) == doctest::Approx(frobenius_sq(stacked)).epsilon(1e-14));
        CHECK(stacked_from_equivalent(y) == stacked);
    }
}

TEST_CASE("model consistency: Y = H S matches Y~ = C G") {
    RngStream rng(7);
    const auto& c = Constellation::get(Modulation::qam16);
    for (int k = 0; k < 200; ++k) {
        const auto g = random_matrix(2, 2, rng);
        const auto s = random_symbol_matrix(1 + k % 15, c, rng);
        const auto via_h = matmul(equivalent_channel(g), s);
        const auto via_c = equivalent_from_stacked(matmul(stack_codes(s), g));
        CHECK(max_abs_diff(via_h, via_c) <= 1e-12);
    }
}
