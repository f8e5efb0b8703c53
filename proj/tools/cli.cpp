#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "blind_stbc/channel.hpp"
#include "blind_stbc/detect.hpp"
#include "blind_stbc/harness.hpp"
#include "blind_stbc/matrix_io.hpp"
#include "blind_stbc/stbc.hpp"

namespace blind_stbc::cli {

namespace {

double parse_number(std::string_view text) {
    std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
        throw std::invalid_argument("malformed number '" + s + "' in grid");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::vector<Detector> parse_detectors(std::string_view text) {
    std::vector<Detector> out;
    for (auto part : split(text, ',')) out.push_back(parse_detector(part));
    return out;
}

/// Opens `path` for writing, or returns nullptr for "-" (standard output).
std::unique_ptr<std::ofstream> open_output(const std::string& path) {
    if (path == "-") return nullptr;
    auto file = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file) throw std::runtime_error("cannot write output file '" + path + "'");
    return file;
}

void write_manifest(const std::string& out_path, const std::string& canonical,
                    std::size_t workers) {
    if (out_path == "-") return;
    std::ofstream manifest(out_path + ".manifest.json", std::ios::trunc);
    if (!manifest) throw std::runtime_error("cannot write manifest for '" + out_path + "'");
    manifest << manifest_json(canonical, workers, out_path) << '\n';
}

struct SweepFlags {
    std::string mod = "bpsk";
    std::string n = "20";
    std::string snr = "0:2:12";
    std::size_t trials = 10000;
    std::string q = "20";
    std::size_t t = 2;
    std::uint64_t seed = 1;
    std::string out = "-";
    std::string detectors = "ml_csi,ils,eils";
    std::size_t workers = 1;
    std::size_t max_iterations = 50;
};

void add_sweep_flags(CLI::App* app, SweepFlags& f, bool with_t) {
    app->add_option("--mod", f.mod, "Modulation: bpsk, qpsk or 16qam")->capture_default_str();
    app->add_option("--snr", f.snr, "SNR grid in dB (start:step:stop or a,b,c)")
        ->capture_default_str();
    app->add_option("--trials", f.trials, "Monte Carlo trials per point")->capture_default_str();
    if (with_t) {
        app->add_option("--t", f.t, "E-ILS majority threshold T")->capture_default_str();
    }
    app->add_option("--seed", f.seed, "Base random seed")->capture_default_str();
    app->add_option("--out", f.out, "Output CSV path ('-' for stdout)")->capture_default_str();
    app->add_option("--detectors", f.detectors, "Comma list of ml_csi, ils, eils, oracle")
        ->capture_default_str();
    app->add_option("--workers", f.workers, "Worker threads (does not change results)")
        ->capture_default_str();
    app->add_option("--max-iterations", f.max_iterations, "ILS iteration cap")
        ->capture_default_str();
}

SweepConfig to_config(const SweepFlags& f) {
    SweepConfig cfg;
    cfg.modulation = parse_modulation(f.mod);
    cfg.snr_grid_db = parse_grid(f.snr);
    cfg.trials = f.trials;
    cfg.eils.majority_threshold = f.t;
    cfg.eils.max_ils_iterations = f.max_iterations;
    cfg.seed = f.seed;
    cfg.detectors = parse_detectors(f.detectors);
    if (f.workers < 1) throw std::invalid_argument("--workers must be >= 1");
    cfg.workers = f.workers;
    return cfg;
}

std::size_t single_count(const std::string& text, const char* flag) {
    const auto grid = parse_count_grid(text);
    if (grid.size() != 1) {
        throw std::invalid_argument(std::string(flag) + " takes a single value here");
    }
    return grid.front();
}

void run_sweep(const std::string& experiment, const SweepFlags& f, std::ostream& out) {
    SweepConfig cfg = to_config(f);
    std::vector<std::size_t> grid;
    if (experiment == "sweep-n") {
        grid = parse_count_grid(f.n);
        cfg.blocks = grid.front();
        cfg.eils.max_executions = single_count(f.q, "--q");
    } else if (experiment == "sweep-q") {
        grid = parse_count_grid(f.q);
        cfg.blocks = single_count(f.n, "--n");
        cfg.eils.max_executions = grid.front();
        cfg.eils.majority_threshold = majority_threshold_for(grid.front());
    } else {
        cfg.blocks = single_count(f.n, "--n");
        cfg.eils.max_executions = single_count(f.q, "--q");
    }
    cfg.validate();

    const std::string canonical = config_json(cfg, experiment, grid);
    const std::string hash = config_hash(canonical);
    auto file = open_output(f.out);

    std::vector<SweepRecord> records;
    if (experiment == "sweep-n") {
        records = sweep_samples(cfg, grid);
    } else if (experiment == "sweep-q") {
        records = sweep_q(cfg, grid);
    } else {
        records = sweep_snr(cfg);
    }

    std::ostream& sink = file ? *file : out;
    write_sweep_csv(sink, records, cfg.seed, experiment, hash);
    if (file && !*file) throw std::runtime_error("failed writing '" + f.out + "'");
    write_manifest(f.out, canonical, cfg.workers);
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty grid");
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) {
            throw std::invalid_argument("grid '" + std::string(text) +
                                        "' must be start:step:stop");
        }
        const double start = parse_number(parts[0]);
        const double step = parse_number(parts[1]);
        const double stop = parse_number(parts[2]);
        if (!(step > 0.0) || stop < start) {
            throw std::invalid_argument("grid '" + std::string(text) +
                                        "' needs step > 0 and stop >= start");
        }
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (count > 100000) throw std::invalid_argument("grid has too many points");
        std::vector<double> out;
        for (std::size_t k = 0; k < count; ++k) {
            out.push_back(start + static_cast<double>(k) * step);
        }
        return out;
    }
    std::vector<double> out;
    for (auto part : split(text, ',')) out.push_back(parse_number(part));
    return out;
}

std::vector<std::size_t> parse_count_grid(std::string_view text) {
    std::vector<std::size_t> out;
    for (const double v : parse_grid(text)) {
        if (v < 1.0 || v != std::floor(v) || v > 1e9) {
            throw std::invalid_argument("'" + std::string(text) +
                                        "' must contain positive integers");
        }
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

int parse_and_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Blind detection of Alamouti-coded 2x2 MIMO by iterative least squares"};
    app.require_subcommand(1);

    SweepFlags snr_flags;
    auto* sweep_snr_cmd = app.add_subcommand("sweep-snr", "BER/SER versus SNR");
    add_sweep_flags(sweep_snr_cmd, snr_flags, true);
    sweep_snr_cmd->add_option("--n", snr_flags.n, "Blocks per burst N")->capture_default_str();
    sweep_snr_cmd->add_option("--q", snr_flags.q, "E-ILS max executions Q")->capture_default_str();

    SweepFlags n_flags;
    n_flags.mod = "qpsk";
    n_flags.snr = "10,12,14";
    n_flags.n = "10:10:40";
    n_flags.t = 4;
    auto* sweep_n_cmd = app.add_subcommand("sweep-n", "BER/SER versus number of blocks N");
    add_sweep_flags(sweep_n_cmd, n_flags, true);
    sweep_n_cmd->add_option("--n", n_flags.n, "Grid of N values")->capture_default_str();
    sweep_n_cmd->add_option("--q", n_flags.q, "E-ILS max executions Q")->capture_default_str();

    SweepFlags q_flags;
    q_flags.mod = "qpsk";
    q_flags.snr = "10";
    q_flags.q = "1,2,5,10,20,50";
    auto* sweep_q_cmd = app.add_subcommand(
        "sweep-q", "BER/SER versus max E-ILS executions Q (T = min(4, Q-1))");
    add_sweep_flags(sweep_q_cmd, q_flags, false);
    sweep_q_cmd->add_option("--n", q_flags.n, "Blocks per burst N")->capture_default_str();
    sweep_q_cmd->add_option("--q", q_flags.q, "Grid of Q values")->capture_default_str();

    HistogramConfig hist;
    std::string hist_mod = "bpsk";
    std::string hist_preset;
    std::string hist_out = "-";
    auto* hist_cmd = app.add_subcommand(
        "histogram", "Residual and error-count histograms of repeated ILS on one realization");
    hist_cmd->add_option("--mod", hist_mod, "Modulation")->capture_default_str();
    hist_cmd->add_option("--preset", hist_preset, "caption (P = 8 dB) or text (P = 6 dB)")
        ->check(CLI::IsMember({"caption", "text"}));
    hist_cmd->add_option("--n", hist.blocks, "Blocks per burst N")->capture_default_str();
    hist_cmd->add_option("--p-db", hist.power_db, "Transmit power P in dB")->capture_default_str();
    hist_cmd->add_option("--noise-var", hist.noise_var, "Noise power")->capture_default_str();
    hist_cmd->add_option("--runs", hist.runs, "Independent ILS runs")->capture_default_str();
    hist_cmd->add_option("--bins", hist.bins, "Residual histogram bins")->capture_default_str();
    hist_cmd->add_option("--seed", hist.seed, "Base random seed")->capture_default_str();
    hist_cmd->add_option("--workers", hist.workers, "Worker threads")->capture_default_str();
    hist_cmd->add_option("--out", hist_out, "Output CSV path ('-' for stdout)")
        ->capture_default_str();

    std::string decode_in;
    std::string decode_mod = "bpsk";
    EilsConfig decode_cfg;
    std::uint64_t decode_seed = 1;
    auto* decode_cmd = app.add_subcommand(
        "decode-once", "Run E-ILS on a 4 x N received matrix read from a text file");
    decode_cmd->add_option("input", decode_in, "Matrix file (one row per line, re+imj tokens)")
        ->required();
    decode_cmd->add_option("--mod", decode_mod, "Modulation")->capture_default_str();
    decode_cmd->add_option("--q", decode_cfg.max_executions, "E-ILS max executions Q")
        ->capture_default_str();
    decode_cmd->add_option("--t", decode_cfg.majority_threshold, "E-ILS majority threshold T")
        ->capture_default_str();
    decode_cmd->add_option("--seed", decode_seed, "Random seed for ILS initializations")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (sweep_snr_cmd->parsed()) {
            run_sweep("sweep-snr", snr_flags, out);
        } else if (sweep_n_cmd->parsed()) {
            run_sweep("sweep-n", n_flags, out);
        } else if (sweep_q_cmd->parsed()) {
            run_sweep("sweep-q", q_flags, out);
        } else if (hist_cmd->parsed()) {
            if (!hist_preset.empty() && hist_cmd->count("--p-db") == 0) {
                hist.power_db = hist_preset == "text" ? HistogramConfig::text_preset().power_db
                                                      : HistogramConfig::caption_preset().power_db;
            }
            hist.modulation = parse_modulation(hist_mod);
            if (hist.workers < 1) throw std::invalid_argument("--workers must be >= 1");
            hist.validate();
            const std::string canonical = config_json(hist);
            auto file = open_output(hist_out);
            const HistogramExperiment result = histogram_experiment(hist);
            write_histogram_csv(file ? *file : out, result, hist.seed, config_hash(canonical));
            write_manifest(hist_out, canonical, hist.workers);
        } else if (decode_cmd->parsed()) {
            const auto& c = Constellation::get(parse_modulation(decode_mod));
            decode_cfg.validate();
            std::ifstream in(decode_in);
            if (!in) throw std::runtime_error("cannot read input file '" + decode_in + "'");
            ComplexMatrix y;
            try {
                y = read_matrix(in);
            } catch (const ParseError& e) {
                throw std::runtime_error(decode_in + ": " + e.what());
            }
            if (y.rows() != 4) {
                throw std::runtime_error(decode_in + ": expected 4 rows, found " +
                                         std::to_string(y.rows()));
            }
            const ReceivedSignal rx = received_from_equivalent(std::move(y));
            RngStream rng(decode_seed, 0, StreamPurpose::eils);
            const EilsResult r = eils(rx, c, decode_cfg, rng);
            out << "# residual " << format_real(r.best.residual) << '\n';
            out << "# executions " << r.executions << '\n';
            out << "# stopped_by_majority " << (r.stopped_by_majority ? 1 : 0) << '\n';
            write_matrix(out, r.best.symbols);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace blind_stbc::cli
