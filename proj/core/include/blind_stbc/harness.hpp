#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "blind_stbc/constellation.hpp"
#include "blind_stbc/detect.hpp"

namespace blind_stbc {

enum class Detector { ml_csi, ils, eils, oracle };

std::string_view detector_name(Detector d) noexcept;
Detector parse_detector(std::string_view name);

struct SweepConfig {
    Modulation modulation = Modulation::bpsk;
    std::size_t blocks = 20;  // N
    std::vector<double> snr_grid_db{0, 2, 4, 6, 8, 10, 12};
    std::size_t trials = 10000;
    EilsConfig eils;
    std::uint64_t seed = 1;
    std::vector<Detector> detectors{Detector::ml_csi, Detector::ils, Detector::eils};
    std::size_t workers = 1;  // never affects results
    double noise_var = 1.0;   // P is set per point from SNR = P / noise_var
    std::uint64_t oracle_cap = kDefaultEnumerationCap;

    void validate() const;
};

/// Per-detector result of one trial.
struct DetectorOutcome {
    Detector detector = Detector::ml_csi;
    ErrorCount aligned;  // after best ambiguity alignment (equals raw for ml_csi)
    ErrorCount raw;
    double residual = 0.0;  // LS residual of the returned pair; 0 for ml_csi
    std::size_t ils_runs = 0;
    std::size_t ils_iterations = 0;
    std::size_t eils_executions = 0;
    bool majority_stop = false;
};

struct TrialOutcome {
    std::vector<DetectorOutcome> detectors;  // same order as SweepConfig::detectors
};

/// One Monte Carlo trial: draws G, S and noise from substreams of (seed, trial_index)
/// and runs every enabled detector on the same received signal.
TrialOutcome run_trial(const SweepConfig& cfg, double snr_db, std::uint64_t trial_index);

struct SweepRecord {
    double snr_db = 0.0;
    std::size_t blocks = 0;
    std::size_t max_executions = 0;
    std::size_t majority_threshold = 0;
    Detector detector = Detector::ml_csi;
    std::size_t trials = 0;
    std::size_t total_bits = 0;
    std::size_t total_symbols = 0;
    std::size_t bit_errors = 0;
    std::size_t symbol_errors = 0;
    double ber = 0.0;
    double ser = 0.0;
    double ber_ci95 = 0.0;  // half-width, normal approximation
    double ser_ci95 = 0.0;
    std::size_t raw_bit_errors = 0;
    std::size_t raw_symbol_errors = 0;
    double raw_ber = 0.0;
    double raw_ser = 0.0;
    double avg_ils_iterations = 0.0;
    double avg_eils_executions = 0.0;
    double majority_stop_fraction = 0.0;
};

/// 95% normal-approximation half-width for an error rate estimated from `total` trials.
double binomial_half_width(std::size_t errors, std::size_t total) noexcept;

/// Runs `count` independent tasks on `workers` threads. Task i is always given index i,
/// so results stored by index are independent of scheduling.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

/// Aggregates cfg.trials trials at one SNR into one record per detector.
std::vector<SweepRecord> run_point(const SweepConfig& cfg, double snr_db);

/// BER/SER versus SNR over cfg.snr_grid_db.
std::vector<SweepRecord> sweep_snr(const SweepConfig& cfg);

/// BER/SER versus N for every SNR in cfg.snr_grid_db.
std::vector<SweepRecord> sweep_samples(const SweepConfig& cfg, std::span<const std::size_t> n_grid);

/// SER versus Q with T = max(1, min(4, Q - 1)) for every SNR in cfg.snr_grid_db.
std::vector<SweepRecord> sweep_q(const SweepConfig& cfg, std::span<const std::size_t> q_grid);

/// Majority threshold used by the Q sweep.
std::size_t majority_threshold_for(std::size_t q) noexcept;

struct HistogramConfig {
    Modulation modulation = Modulation::bpsk;
    std::size_t blocks = 20;
    double power_db = 8.0;
    double noise_var = 1.0;
    std::size_t runs = 10000;
    std::size_t bins = 50;
    std::uint64_t seed = 1;
    std::size_t max_ils_iterations = 50;
    std::size_t workers = 1;

    /// P = 8 dB (the default).
    static HistogramConfig caption_preset();
    /// P = 6 dB, the lower-power variant of the same experiment.
    static HistogramConfig text_preset();

    void validate() const;
};

enum class HistogramKind { residual, error_count };

struct HistogramRecord {
    HistogramKind kind = HistogramKind::residual;
    std::vector<double> bin_edges;  // counts.size() + 1 edges; last bin closed
    std::vector<std::size_t> counts;

    std::size_t modal_bin() const noexcept;
};

struct HistogramExperiment {
    HistogramRecord residual;
    HistogramRecord errors;
    std::vector<double> run_residuals;
    std::vector<std::size_t> run_errors;  // aligned symbol errors per run
    std::vector<std::size_t> run_iterations;
};

/// Repeated ILS on one fixed (G, S, noise) realization from independent random inits.
HistogramExperiment histogram_experiment(const HistogramConfig& cfg);

/// Bin index of `value` in an equal-width histogram; clamps to the last bin.
std::size_t bin_index(std::span<const double> edges, double value) noexcept;

/// Canonical JSON of the result-determining configuration (workers excluded).
std::string config_json(const SweepConfig& cfg, std::string_view experiment,
                        std::span<const std::size_t> grid = {});
std::string config_json(const HistogramConfig& cfg);

/// 64-bit FNV-1a of the canonical config, as 16 hex digits.
std::string config_hash(std::string_view canonical_json);

/// Run manifest: canonical config plus hash, worker count and a UTC timestamp.
std::string manifest_json(std::string_view canonical_json, std::size_t workers,
                          std::string_view output_path);

/// "# ..." provenance line, column header, then one row per record; 17 significant digits.
void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> records, std::uint64_t seed,
                     std::string_view experiment, std::string_view hash);

void write_histogram_csv(std::ostream& os, const HistogramExperiment& result, std::uint64_t seed,
                         std::string_view hash);

}  // namespace blind_stbc
