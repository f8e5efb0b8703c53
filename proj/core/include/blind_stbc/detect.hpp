#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "blind_stbc/constellation.hpp"
#include "blind_stbc/linalg.hpp"
#include "blind_stbc/random.hpp"
#include "blind_stbc/stbc.hpp"

namespace blind_stbc {

/// Raised by exhaustive_ls when |A|^(2N) exceeds the enumeration cap.
class EnumerationTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 20;

/// One (G, S) pair returned by a detector, with its LS fit.
///
/// `channel` is the *effective* channel sqrt(P/2) G; detectors never see P.
struct DetectionResult {
    ComplexMatrix symbols;             // 2 x N, alphabet valued
    ComplexMatrix channel;             // 2 x 2
    ComplexMatrix equivalent_channel;  // 4 x 2, equivalent_channel(channel)
    double residual = 0.0;             // ||Y - H S||_F^2
    std::size_t iterations = 0;
    bool converged = false;
};

struct EilsConfig {
    std::size_t max_executions = 20;      // Q
    std::size_t majority_threshold = 2;   // T
    double residual_match_tol = 1e-9;     // relative, against max(R, 1)
    std::size_t max_ils_iterations = 50;

    /// Throws std::invalid_argument on Q < 1, T < 1, negative tolerance or a zero cap.
    void validate() const;
};

struct EilsResult {
    DetectionResult best;
    std::size_t executions = 0;  // successful ILS runs; equals residual_history.size()
    bool stopped_by_majority = false;
    std::vector<double> residual_history;
    std::size_t total_ils_iterations = 0;  // summed over successful runs
    std::size_t failed_runs = 0;           // singular or non-converged, not counted in history
};

struct OracleResult {
    ComplexMatrix symbols;
    double residual = 0.0;
    std::uint64_t candidates = 0;
};

/// Coherent detection with known effective channel: slice((H^H H)^-1 H^H Y).
/// Because H^H H is a multiple of I for the Alamouti code this is exact ML.
ComplexMatrix coherent_ml(const ComplexMatrix& received, const ComplexMatrix& effective_h,
                          const Constellation& c);

/// LS channel for known symbols, (C^H C)^-1 C^H Y~, using C^H C = ||S||_F^2 I.
/// Throws SingularError if S is all zero.
ComplexMatrix estimate_channel(const ComplexMatrix& stacked, const ComplexMatrix& symbols);

/// slice(solve_normal_eq(equivalent_channel(G), Y)).
ComplexMatrix detect_symbols(const ComplexMatrix& received, const ComplexMatrix& channel,
                             const Constellation& c);

/// ||Y - H S||_F^2.
double residual(const ComplexMatrix& received, const ComplexMatrix& equivalent_h,
                const ComplexMatrix& symbols);

/// min over G of ||Y~ - C(S) G||_F^2: the fit of the Alamouti-structured model.
double structured_ls_residual(const ComplexMatrix& stacked, const ComplexMatrix& symbols);

/// min over unconstrained 4x2 H of ||Y - H S||_F^2, through the LS channel.
double unstructured_ls_residual(const ComplexMatrix& received, const ComplexMatrix& symbols);

/// ||Y P||_F^2 with P = I_N - S^H (S S^H)^-1 S, formed explicitly.
double projection_criterion(const ComplexMatrix& received, const ComplexMatrix& symbols);

/// Single ILS run from `init`: alternate estimate_channel / detect_symbols until
/// the detected symbols repeat or `max_iterations` is reached. When `residual_trace`
/// is non-null, the residual after every iteration is appended to it.
/// Propagates SingularError.
DetectionResult ils(const ReceivedSignal& rx, const Constellation& c, ComplexMatrix init,
                    std::size_t max_iterations, std::vector<double>* residual_trace = nullptr);

/// Enhanced ILS: restart ILS from uniform random inits, keep the minimum-residual
/// result, and stop early once the current run is the minimum so far and its
/// residual matches at least T earlier ones. Runs that are singular or hit the
/// iteration cap are discarded and redrawn.
EilsResult eils(const ReceivedSignal& rx, const Constellation& c, const EilsConfig& cfg,
                RngStream& rng);

/// Global minimiser of the structured LS criterion by enumerating every S in A^(2 x N).
/// Throws EnumerationTooLarge if |A|^(2N) > cap.
OracleResult exhaustive_ls(const ReceivedSignal& rx, const Constellation& c,
                           std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace blind_stbc
