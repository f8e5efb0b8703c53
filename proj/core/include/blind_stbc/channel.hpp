#pragma once

#include <cstddef>

#include "blind_stbc/linalg.hpp"
#include "blind_stbc/random.hpp"
#include "blind_stbc/stbc.hpp"

namespace blind_stbc {

double db_to_linear(double db) noexcept;

/// 2x2 matrix of i.i.d. CN(0, 1) entries (quasi-static flat Rayleigh fading).
ComplexMatrix draw_channel(RngStream& rng);

/// rows x cols matrix of i.i.d. CN(0, noise_var) entries. noise_var = 0 gives zeros.
ComplexMatrix draw_noise(std::size_t rows, std::size_t cols, double noise_var, RngStream& rng);

/// A physical channel G together with transmit power P and noise power.
/// The equivalent channel H is derived once at construction.
class ChannelRealization {
public:
    ChannelRealization(ComplexMatrix g, double power, double noise_var);

    const ComplexMatrix& g() const noexcept { return g_; }
    const ComplexMatrix& h() const noexcept { return h_; }
    double power() const noexcept { return power_; }
    double noise_var() const noexcept { return noise_var_; }
    double snr() const noexcept { return power_ / noise_var_; }

    /// sqrt(P/2) G and sqrt(P/2) H: the channels a detector actually sees.
    ComplexMatrix effective_g() const;
    ComplexMatrix effective_h() const;

private:
    ComplexMatrix g_;
    ComplexMatrix h_;
    double power_;
    double noise_var_;
};

/// Sends a 2 x N symbol matrix through the channel. One noise draw Z (2N x 2) is
/// shared by both returned representations.
ReceivedSignal transmit(const ComplexMatrix& symbols, const ChannelRealization& channel,
                        RngStream& rng);

}  // namespace blind_stbc
