#include "blind_stbc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "blind_stbc/channel.hpp"

namespace blind_stbc {

namespace {

constexpr std::size_t kMaxInitRedraws = 100;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double safe_ratio(double num, double den) noexcept { return den > 0.0 ? num / den : 0.0; }

DetectionResult ils_with_redraw(const ReceivedSignal& rx, const Constellation& c,
                                std::size_t max_iterations, RngStream& rng) {
    for (std::size_t attempt = 0;; ++attempt) {
        try {
            return ils(rx, c, random_symbol_matrix(rx.blocks(), c, rng), max_iterations);
        } catch (const SingularError&) {
            if (attempt + 1 >= kMaxInitRedraws) throw;
        }
    }
}

}  // namespace

std::string_view detector_name(Detector d) noexcept {
    switch (d) {
        case Detector::ml_csi: return "ml_csi";
        case Detector::ils: return "ils";
        case Detector::eils: return "eils";
        case Detector::oracle: return "oracle";
    }
    return "?";
}

Detector parse_detector(std::string_view name) {
    for (auto d : {Detector::ml_csi, Detector::ils, Detector::eils, Detector::oracle}) {
        if (name == detector_name(d)) return d;
    }
    throw std::invalid_argument("unknown detector '" + std::string(name) +
                                "' (expected ml_csi, ils, eils or oracle)");
}

void SweepConfig::validate() const {
    if (blocks < 1) throw std::invalid_argument("N must be >= 1");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (snr_grid_db.empty()) throw std::invalid_argument("SNR grid must not be empty");
    for (double snr : snr_grid_db) {
        if (!std::isfinite(snr)) throw std::invalid_argument("SNR grid entries must be finite");
    }
    if (detectors.empty()) throw std::invalid_argument("at least one detector is required");
    if (!(noise_var > 0.0)) throw std::invalid_argument("noise variance must be > 0");
    eils.validate();
    if (std::find(detectors.begin(), detectors.end(), Detector::oracle) != detectors.end()) {
        const auto& c = Constellation::get(modulation);
        const double log_count = 2.0 * static_cast<double>(blocks) * std::log2(c.size());
        if (log_count > std::log2(static_cast<double>(oracle_cap))) {
            throw std::invalid_argument("oracle detector needs |A|^(2N) <= enumeration cap");
        }
    }
}

TrialOutcome run_trial(const SweepConfig& cfg, double snr_db, std::uint64_t trial_index) {
    const auto& c = Constellation::get(cfg.modulation);

    RngStream channel_rng(cfg.seed, trial_index, StreamPurpose::channel);
    RngStream symbol_rng(cfg.seed, trial_index, StreamPurpose::symbols);
    RngStream noise_rng(cfg.seed, trial_index, StreamPurpose::noise);

    const double power = db_to_linear(snr_db) * cfg.noise_var;
    const ChannelRealization channel(draw_channel(channel_rng), power, cfg.noise_var);
    const ComplexMatrix truth = random_symbol_matrix(cfg.blocks, c, symbol_rng);
    const ReceivedSignal rx = transmit(truth, channel, noise_rng);

    TrialOutcome out;
    out.detectors.reserve(cfg.detectors.size());
    for (const Detector d : cfg.detectors) {
        DetectorOutcome o;
        o.detector = d;
        ComplexMatrix detected;
        switch (d) {
            case Detector::ml_csi: {
                detected = coherent_ml(rx.equivalent, channel.effective_h(), c);
                break;
            }
            case Detector::ils: {
                RngStream rng(cfg.seed, trial_index, StreamPurpose::ils_init);
                DetectionResult r = ils_with_redraw(rx, c, cfg.eils.max_ils_iterations, rng);
                o.residual = r.residual;
                o.ils_runs = 1;
                o.ils_iterations = r.iterations;
                detected = std::move(r.symbols);
                break;
            }
            case Detector::eils: {
                RngStream rng(cfg.seed, trial_index, StreamPurpose::eils);
                EilsResult r = eils(rx, c, cfg.eils, rng);
                o.residual = r.best.residual;
                o.ils_runs = r.executions;
                o.ils_iterations = r.total_ils_iterations;
                o.eils_executions = r.executions;
                o.majority_stop = r.stopped_by_majority;
                detected = std::move(r.best.symbols);
                break;
            }
            case Detector::oracle: {
                OracleResult r = exhaustive_ls(rx, c, cfg.oracle_cap);
                o.residual = r.residual;
                detected = std::move(r.symbols);
                break;
            }
        }
        o.raw = count_errors(detected, truth, c);
        o.aligned = d == Detector::ml_csi ? o.raw : best_rotation_errors(detected, truth, c).errors;
        out.detectors.push_back(o);
    }
    return out;
}

double binomial_half_width(std::size_t errors, std::size_t total) noexcept {
    if (total == 0) return 0.0;
    const double p = static_cast<double>(errors) / static_cast<double>(total);
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(total));
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < count; i += workers) task(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

std::vector<SweepRecord> run_point(const SweepConfig& cfg, double snr_db) {
    cfg.validate();
    const auto& c = Constellation::get(cfg.modulation);

    std::vector<TrialOutcome> outcomes(cfg.trials);
    parallel_for(cfg.trials, cfg.workers,
                 [&](std::size_t t) { outcomes[t] = run_trial(cfg, snr_db, t); });

    std::vector<SweepRecord> records;
    for (std::size_t k = 0; k < cfg.detectors.size(); ++k) {
        SweepRecord rec;
        rec.snr_db = snr_db;
        rec.blocks = cfg.blocks;
        rec.max_executions = cfg.eils.max_executions;
        rec.majority_threshold = cfg.eils.majority_threshold;
        rec.detector = cfg.detectors[k];
        rec.trials = cfg.trials;
        rec.total_symbols = cfg.trials * 2 * cfg.blocks;
        rec.total_bits = rec.total_symbols * c.bits_per_symbol();

        std::size_t ils_runs = 0;
        std::size_t ils_iterations = 0;
        std::size_t executions = 0;
        std::size_t majority = 0;
        for (const auto& trial : outcomes) {
            const DetectorOutcome& o = trial.detectors[k];
            rec.bit_errors += o.aligned.bits;
            rec.symbol_errors += o.aligned.symbols;
            rec.raw_bit_errors += o.raw.bits;
            rec.raw_symbol_errors += o.raw.symbols;
            ils_runs += o.ils_runs;
            ils_iterations += o.ils_iterations;
            executions += o.eils_executions;
            majority += o.majority_stop ? 1 : 0;
        }
        const auto bits = static_cast<double>(rec.total_bits);
        const auto symbols = static_cast<double>(rec.total_symbols);
        rec.ber = rec.bit_errors / bits;
        rec.ser = rec.symbol_errors / symbols;
        rec.ber_ci95 = binomial_half_width(rec.bit_errors, rec.total_bits);
        rec.ser_ci95 = binomial_half_width(rec.symbol_errors, rec.total_symbols);
        rec.raw_ber = rec.raw_bit_errors / bits;
        rec.raw_ser = rec.raw_symbol_errors / symbols;
        rec.avg_ils_iterations = safe_ratio(static_cast<double>(ils_iterations),
                                            static_cast<double>(ils_runs));
        if (rec.detector == Detector::eils) {
            rec.avg_eils_executions =
                static_cast<double>(executions) / static_cast<double>(cfg.trials);
            rec.majority_stop_fraction =
                static_cast<double>(majority) / static_cast<double>(cfg.trials);
        }
        records.push_back(rec);
    }
    return records;
}

std::vector<SweepRecord> sweep_snr(const SweepConfig& cfg) {
    cfg.validate();
    std::vector<SweepRecord> out;
    for (const double snr : cfg.snr_grid_db) {
        auto point = run_point(cfg, snr);
        out.insert(out.end(), point.begin(), point.end());
    }
    return out;
}

std::vector<SweepRecord> sweep_samples(const SweepConfig& cfg,
                                       std::span<const std::size_t> n_grid) {
    if (n_grid.empty()) throw std::invalid_argument("N grid must not be empty");
    std::vector<SweepRecord> out;
    for (const double snr : cfg.snr_grid_db) {
        for (const std::size_t n : n_grid) {
            SweepConfig sub = cfg;
            sub.blocks = n;
            auto point = run_point(sub, snr);
            out.insert(out.end(), point.begin(), point.end());
        }
    }
    return out;
}

std::size_t majority_threshold_for(std::size_t q) noexcept {
    const std::size_t t = std::min<std::size_t>(4, q > 0 ? q - 1 : 0);
    return std::max<std::size_t>(t, 1);
}

std::vector<SweepRecord> sweep_q(const SweepConfig& cfg, std::span<const std::size_t> q_grid) {
    if (q_grid.empty()) throw std::invalid_argument("Q grid must not be empty");
    std::vector<SweepRecord> out;
    for (const double snr : cfg.snr_grid_db) {
        for (const std::size_t q : q_grid) {
            SweepConfig sub = cfg;
            sub.eils.max_executions = q;
            sub.eils.majority_threshold = majority_threshold_for(q);
            auto point = run_point(sub, snr);
            out.insert(out.end(), point.begin(), point.end());
        }
    }
    return out;
}

HistogramConfig HistogramConfig::caption_preset() { return HistogramConfig{}; }

HistogramConfig HistogramConfig::text_preset() {
    HistogramConfig cfg;
    cfg.power_db = 6.0;
    return cfg;
}

void HistogramConfig::validate() const {
    if (blocks < 1) throw std::invalid_argument("N must be >= 1");
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (bins < 1) throw std::invalid_argument("bins must be >= 1");
    if (!(noise_var >= 0.0)) throw std::invalid_argument("noise variance must be >= 0");
    if (!std::isfinite(power_db)) throw std::invalid_argument("power must be finite");
    if (max_ils_iterations < 1) throw std::invalid_argument("ILS iteration cap must be >= 1");
}

std::size_t HistogramRecord::modal_bin() const noexcept {
    return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) -
                                    counts.begin());
}

std::size_t bin_index(std::span<const double> edges, double value) noexcept {
    const std::size_t bins = edges.size() - 1;
    const double lo = edges.front();
    const double width = edges.back() - lo;
    if (!(width > 0.0) || value <= lo) return 0;
    const auto idx = static_cast<std::size_t>((value - lo) / width * static_cast<double>(bins));
    return std::min(idx, bins - 1);
}

HistogramExperiment histogram_experiment(const HistogramConfig& cfg) {
    cfg.validate();
    const auto& c = Constellation::get(cfg.modulation);

    RngStream channel_rng(cfg.seed, 0, StreamPurpose::channel);
    RngStream symbol_rng(cfg.seed, 0, StreamPurpose::symbols);
    RngStream noise_rng(cfg.seed, 0, StreamPurpose::noise);
    const ChannelRealization channel(draw_channel(channel_rng), db_to_linear(cfg.power_db),
                                     cfg.noise_var);
    const ComplexMatrix truth = random_symbol_matrix(cfg.blocks, c, symbol_rng);
    const ReceivedSignal rx = transmit(truth, channel, noise_rng);

    HistogramExperiment out;
    out.run_residuals.resize(cfg.runs);
    out.run_errors.resize(cfg.runs);
    out.run_iterations.resize(cfg.runs);
    parallel_for(cfg.runs, cfg.workers, [&](std::size_t run) {
        RngStream rng(cfg.seed, run, StreamPurpose::histogram_run);
        const DetectionResult r = ils_with_redraw(rx, c, cfg.max_ils_iterations, rng);
        out.run_residuals[run] = r.residual;
        out.run_errors[run] = best_rotation_errors(r.symbols, truth, c).errors.symbols;
        out.run_iterations[run] = r.iterations;
    });

    const auto [lo_it, hi_it] = std::minmax_element(out.run_residuals.begin(),
                                                     out.run_residuals.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    out.residual.kind = HistogramKind::residual;
    out.residual.counts.assign(cfg.bins, 0);
    for (std::size_t b = 0; b <= cfg.bins; ++b) {
        out.residual.bin_edges.push_back(lo + (hi - lo) * static_cast<double>(b) /
                                                  static_cast<double>(cfg.bins));
    }
    out.residual.bin_edges.back() = hi;
    for (const double r : out.run_residuals) {
        ++out.residual.counts[bin_index(out.residual.bin_edges, r)];
    }

    const std::size_t max_errors = 2 * cfg.blocks;
    out.errors.kind = HistogramKind::error_count;
    out.errors.counts.assign(max_errors + 1, 0);
    for (std::size_t e = 0; e <= max_errors + 1; ++e) {
        out.errors.bin_edges.push_back(static_cast<double>(e));
    }
    for (const std::size_t e : out.run_errors) {
        ++out.errors.counts[e];
    }
    return out;
}

std::string config_json(const SweepConfig& cfg, std::string_view experiment,
                        std::span<const std::size_t> grid) {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["modulation"] = modulation_name(cfg.modulation);
    j["n"] = cfg.blocks;
    j["snr_grid_db"] = cfg.snr_grid_db;
    j["trials"] = cfg.trials;
    j["q"] = cfg.eils.max_executions;
    j["t"] = cfg.eils.majority_threshold;
    j["residual_match_tol"] = cfg.eils.residual_match_tol;
    j["max_ils_iterations"] = cfg.eils.max_ils_iterations;
    j["seed"] = cfg.seed;
    j["noise_var"] = cfg.noise_var;
    j["oracle_cap"] = cfg.oracle_cap;
    std::vector<std::string> detectors;
    for (auto d : cfg.detectors) detectors.emplace_back(detector_name(d));
    j["detectors"] = detectors;
    if (!grid.empty()) {
        j["grid"] = std::vector<std::size_t>(grid.begin(), grid.end());
    }
    return j.dump();
}

std::string config_json(const HistogramConfig& cfg) {
    nlohmann::json j;
    j["experiment"] = "histogram";
    j["modulation"] = modulation_name(cfg.modulation);
    j["n"] = cfg.blocks;
    j["p_db"] = cfg.power_db;
    j["noise_var"] = cfg.noise_var;
    j["runs"] = cfg.runs;
    j["bins"] = cfg.bins;
    j["seed"] = cfg.seed;
    j["max_ils_iterations"] = cfg.max_ils_iterations;
    return j.dump();
}

std::string config_hash(std::string_view canonical_json) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : canonical_json) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string manifest_json(std::string_view canonical_json, std::size_t workers,
                          std::string_view output_path) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

    nlohmann::json j;
    j["config"] = nlohmann::json::parse(canonical_json);
    j["config_hash"] = config_hash(canonical_json);
    j["workers"] = workers;
    j["output"] = output_path;
    j["created_utc"] = stamp;
    return j.dump(2);
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> records, std::uint64_t seed,
                     std::string_view experiment, std::string_view hash) {
    os << "# blind_stbc " << experiment << " seed=" << seed << " config_hash=" << hash << '\n';
    os << "snr_db,n,q,t,detector,ber,ber_ci95,ser,ser_ci95,raw_ber,raw_ser,trials,total_bits,"
          "total_symbols,bit_errors,symbol_errors,avg_ils_iterations,avg_eils_executions,"
          "majority_stop_fraction,seed,config_hash\n";
    for (const auto& r : records) {
        os << format_double(r.snr_db) << ',' << r.blocks << ',' << r.max_executions << ','
           << r.majority_threshold << ',' << detector_name(r.detector) << ','
           << format_double(r.ber) << ',' << format_double(r.ber_ci95) << ','
           << format_double(r.ser) << ',' << format_double(r.ser_ci95) << ','
           << format_double(r.raw_ber) << ',' << format_double(r.raw_ser) << ',' << r.trials
           << ',' << r.total_bits << ',' << r.total_symbols << ',' << r.bit_errors << ','
           << r.symbol_errors << ',' << format_double(r.avg_ils_iterations) << ','
           << format_double(r.avg_eils_executions) << ','
           << format_double(r.majority_stop_fraction) << ',' << seed << ',' << hash << '\n';
    }
}

void write_histogram_csv(std::ostream& os, const HistogramExperiment& result, std::uint64_t seed,
                         std::string_view hash) {
    os << "# blind_stbc histogram seed=" << seed << " config_hash=" << hash << '\n';
    os << "kind,bin,bin_lo,bin_hi,count\n";
    for (const HistogramRecord* h : {&result.residual, &result.errors}) {
        const char* kind = h->kind == HistogramKind::residual ? "residual" : "error_count";
        for (std::size_t b = 0; b < h->counts.size(); ++b) {
            os << kind << ',' << b << ',' << format_double(h->bin_edges[b]) << ','
               << format_double(h->bin_edges[b + 1]) << ',' << h->counts[b] << '\n';
        }
    }
}

}  // namespace blind_stbc
