#include "blind_stbc/random.hpp"

#include <cmath>

namespace blind_stbc {

namespace {

std::mt19937_64 seeded_engine(std::initializer_list<std::uint64_t> words) {
    std::vector<std::uint32_t> seeds;
    seeds.reserve(words.size() * 2);
    for (auto w : words) {
        seeds.push_back(static_cast<std::uint32_t>(w & 0xffffffffu));
        seeds.push_back(static_cast<std::uint32_t>(w >> 32));
    }
    std::seed_seq seq(seeds.begin(), seeds.end());
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : engine_(seeded_engine({seed})) {}

RngStream::RngStream(std::uint64_t seed, std::uint64_t trial, StreamPurpose purpose)
    : engine_(seeded_engine({seed, trial, static_cast<std::uint64_t>(purpose)})) {}

std::size_t RngStream::uniform_index(std::size_t n) {
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(engine_);
}

double RngStream::standard_normal() {
    if (cached_normal_) {
        const double v = *cached_normal_;
        cached_normal_.reset();
        return v;
    }
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = uniform(engine_);
        v = uniform(engine_);
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * factor;
    return u * factor;
}

std::complex<double> RngStream::complex_gaussian(double variance) {
    const double sigma = std::sqrt(variance / 2.0);
    const double re = standard_normal();
    const double im = standard_normal();
    return {sigma * re, sigma * im};
}

}  // namespace blind_stbc
