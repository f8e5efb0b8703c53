#include "blind_stbc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace blind_stbc {

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

ComplexMatrix draw_channel(RngStream& rng) { return draw_noise(2, 2, 1.0, rng); }

ComplexMatrix draw_noise(std::size_t rows, std::size_t cols, double noise_var, RngStream& rng) {
    if (noise_var < 0.0) {
        throw std::invalid_argument("draw_noise: negative noise variance");
    }
    ComplexMatrix out(rows, cols);
    if (noise_var == 0.0) {
        return out;
    }
    for (auto& e : out.entries()) {
        e = rng.complex_gaussian(noise_var);
    }
    return out;
}

ChannelRealization::ChannelRealization(ComplexMatrix g, double power, double noise_var)
    : g_(std::move(g)), h_(equivalent_channel(g_)), power_(power), noise_var_(noise_var) {
    if (power < 0.0 || noise_var < 0.0) {
        throw std::invalid_argument("ChannelRealization: power and noise variance must be >= 0");
    }
}

ComplexMatrix ChannelRealization::effective_g() const { return std::sqrt(power_ / 2.0) * g_; }

ComplexMatrix ChannelRealization::effective_h() const { return std::sqrt(power_ / 2.0) * h_; }

ReceivedSignal transmit(const ComplexMatrix& symbols, const ChannelRealization& channel,
                        RngStream& rng) {
    ComplexMatrix stacked = matmul(stack_codes(symbols), channel.effective_g());
    stacked += draw_noise(stacked.rows(), 2, channel.noise_var(), rng);
    auto equivalent = equivalent_from_stacked(stacked);
    return {std::move(equivalent), std::move(stacked)};
}

}  // namespace blind_stbc
