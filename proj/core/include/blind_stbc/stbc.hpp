#pragma once

#include <span>

#include "blind_stbc/linalg.hpp"

namespace blind_stbc {

/// The two symbols (s_{2n-1}, s_{2n}) carried by one Alamouti block.
struct SymbolBlock {
    Complex s1;
    Complex s2;
};

/// Both views of one received burst of N blocks.
///  - `equivalent` (4 x N): column n is [y11, conj(y12), y21, conj(y22)] so that
///    equivalent = H S + noise with H the 4x2 equivalent channel.
///  - `stacked` (2N x 2): rows 2n, 2n+1 are time slots 1, 2 of block n, columns are
///    receive antennas, so that stacked = C G + noise.
struct ReceivedSignal {
    ComplexMatrix equivalent;
    ComplexMatrix stacked;

    std::size_t blocks() const noexcept { return equivalent.cols(); }
};

/// [[s1, s2], [-conj(s2), conj(s1)]]
ComplexMatrix encode_block(SymbolBlock block);

/// Vertical concatenation of encode_block over the columns of a 2 x N symbol matrix.
ComplexMatrix stack_codes(const ComplexMatrix& symbols);

/// 4x2 equivalent channel of a 2x2 physical channel G = [[h11, h12], [h21, h22]]:
/// [[h11, h21], [conj(h21), -conj(h11)], [h12, h22], [conj(h22), -conj(h12)]].
ComplexMatrix equivalent_channel(const ComplexMatrix& g);

/// Builds both representations from per-block 2x2 received matrices.
ReceivedSignal stack_received(std::span<const ComplexMatrix> blocks);

/// Rebuilds the 2N x 2 stacked form from the 4 x N equivalent form and back.
ComplexMatrix stacked_from_equivalent(const ComplexMatrix& equivalent);
ComplexMatrix equivalent_from_stacked(const ComplexMatrix& stacked);

ReceivedSignal received_from_equivalent(ComplexMatrix equivalent);

}  // namespace blind_stbc
