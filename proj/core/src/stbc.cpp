#include "blind_stbc/stbc.hpp"

#include <string>

namespace blind_stbc {

ComplexMatrix encode_block(SymbolBlock block) {
    return ComplexMatrix{{block.s1, block.s2}, {-std::conj(block.s2), std::conj(block.s1)}};
}

ComplexMatrix stack_codes(const ComplexMatrix& symbols) {
    if (symbols.rows() != 2) {
        throw DimensionError("stack_codes: symbol matrix must have 2 rows");
    }
    const std::size_t blocks = symbols.cols();
    ComplexMatrix c(2 * blocks, 2);
    for (std::size_t n = 0; n < blocks; ++n) {
        const Complex s1 = symbols(0, n);
        const Complex s2 = symbols(1, n);
        c(2 * n, 0) = s1;
        c(2 * n, 1) = s2;
        c(2 * n + 1, 0) = -std::conj(s2);
        c(2 * n + 1, 1) = std::conj(s1);
    }
    return c;
}

ComplexMatrix equivalent_channel(const ComplexMatrix& g) {
    if (g.rows() != 2 || g.cols() != 2) {
        throw DimensionError("equivalent_channel: G must be 2x2");
    }
    const Complex h11 = g(0, 0);
    const Complex h12 = g(0, 1);
    const Complex h21 = g(1, 0);
    const Complex h22 = g(1, 1);
    return ComplexMatrix{{h11, h21},
                         {std::conj(h21), -std::conj(h11)},
                         {h12, h22},
                         {std::conj(h22), -std::conj(h12)}};
}

ComplexMatrix equivalent_from_stacked(const ComplexMatrix& stacked) {
    if (stacked.cols() != 2 || stacked.rows() % 2 != 0) {
        throw DimensionError("equivalent_from_stacked: expected 2N x 2");
    }
    const std::size_t blocks = stacked.rows() / 2;
    ComplexMatrix y(4, blocks);
    for (std::size_t n = 0; n < blocks; ++n) {
        y(0, n) = stacked(2 * n, 0);
        y(1, n) = std::conj(stacked(2 * n + 1, 0));
        y(2, n) = stacked(2 * n, 1);
        y(3, n) = std::conj(stacked(2 * n + 1, 1));
    }
    return y;
}

ComplexMatrix stacked_from_equivalent(const ComplexMatrix& equivalent) {
    if (equivalent.rows() != 4) {
        throw DimensionError("stacked_from_equivalent: expected 4 x N");
    }
    const std::size_t blocks = equivalent.cols();
    ComplexMatrix stacked(2 * blocks, 2);
    for (std::size_t n = 0; n < blocks; ++n) {
        stacked(2 * n, 0) = equivalent(0, n);
        stacked(2 * n + 1, 0) = std::conj(equivalent(1, n));
        stacked(2 * n, 1) = equivalent(2, n);
        stacked(2 * n + 1, 1) = std::conj(equivalent(3, n));
    }
    return stacked;
}

ReceivedSignal stack_received(std::span<const ComplexMatrix> blocks) {
    if (blocks.empty()) {
        throw DimensionError("stack_received: need at least one block");
    }
    ComplexMatrix stacked(2 * blocks.size(), 2);
    for (std::size_t n = 0; n < blocks.size(); ++n) {
        const auto& b = blocks[n];
        if (b.rows() != 2 || b.cols() != 2) {
            throw DimensionError("stack_received: block " + std::to_string(n) + " is not 2x2");
        }
        for (std::size_t r = 0; r < 2; ++r) {
            for (std::size_t c = 0; c < 2; ++c) {
                stacked(2 * n + r, c) = b(r, c);
            }
        }
    }
    auto equivalent = equivalent_from_stacked(stacked);
    return {std::move(equivalent), std::move(stacked)};
}

ReceivedSignal received_from_equivalent(ComplexMatrix equivalent) {
    auto stacked = stacked_from_equivalent(equivalent);
    return {std::move(equivalent), std::move(stacked)};
}

}  // namespace blind_stbc
