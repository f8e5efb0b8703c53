#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "blind_stbc/channel.hpp"
#include "blind_stbc/detect.hpp"
#include "blind_stbc/matrix_io.hpp"
#include "cli.hpp"
#include "test_support.hpp"

using namespace blind_stbc;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "blind_stbc");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::parse_and_run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path tmp(const std::string& name) { return fs::path(BLIND_STBC_TEST_TMPDIR) / name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// CSV body without the provenance line.
std::string body(const std::string& csv) { return csv.substr(csv.find('\n') + 1); }

}  // namespace

TEST_CASE("parse_grid") {
    CHECK(cli::parse_grid("0:2:12") == std::vector<double>{0, 2, 4, 6, 8, 10, 12});
    CHECK(cli::parse_grid("0:0.5:1") == std::vector<double>{0, 0.5, 1});
    CHECK(cli::parse_grid("10,12,14") == std::vector<double>{10, 12, 14});
    CHECK(cli::parse_grid("-3") == std::vector<double>{-3});
    CHECK(cli::parse_grid("5:1:5") == std::vector<double>{5});
    for (const char* bad : {"", "1:2", "0:0:4", "4:1:0", "0:-1:4", "a", "1,,2", "1:2:3:4"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(cli::parse_grid(bad), std::invalid_argument);
    }
    CHECK(cli::parse_count_grid("10:10:40") == std::vector<std::size_t>{10, 20, 30, 40});
    CHECK_THROWS_AS(cli::parse_count_grid("0,1"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_count_grid("1.5"), std::invalid_argument);
}

TEST_CASE("invalid invocations exit nonzero with one diagnostic line") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {},
             {"sweep-snr", "--bogus"},
             {"sweep-snr", "--trials", "0"},
             {"sweep-snr", "--trials", "-5"},
             {"sweep-snr", "--mod", "8psk"},
             {"sweep-snr", "--snr", "4:1:0"},
             {"sweep-snr", "--n", "0"},
             {"sweep-snr", "--detectors", "zf"},
             {"sweep-snr", "--workers", "0"},
             {"sweep-n", "--q", "5,6"},
             {"histogram", "--preset", "figure"},
             {"histogram", "--runs", "0"},
             {"decode-once", "/nonexistent/y.txt"},
         }) {
        CAPTURE(args.size());
        const auto r = run(args);
        CHECK(r.code != 0);
        CHECK(r.err.starts_with("error: "));
        CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    }
}

TEST_CASE("unwritable output path fails before running") {
    const auto r = run({"sweep-snr", "--trials", "1", "--out", "/nonexistent/dir/out.csv"});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
}

TEST_CASE("help") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("sweep-snr") != std::string::npos);
}

TEST_CASE("sweep-snr to stdout and to a file with manifest") {
    const std::vector<std::string> base{"sweep-snr", "--mod", "qpsk", "--snr", "0,8", "--trials",
                                        "10", "--n", "8", "--q", "4", "--seed", "3"};
    const auto to_stdout = run(base);
    REQUIRE(to_stdout.code == 0);
    CHECK(to_stdout.out.starts_with("# blind_stbc sweep-snr seed=3 config_hash="));
    std::istringstream lines(to_stdout.out);
    std::size_t count = 0;
    for (std::string line; std::getline(lines, line);) ++count;
    CHECK(count == 2 + 2 * 3);

    const auto path = tmp("cli_sweep.csv");
    fs::remove(path);
    auto args = base;
    args.insert(args.end(), {"--out", path.string(), "--workers", "3"});
    const auto to_file = run(args);
    REQUIRE(to_file.code == 0);
    CHECK(to_file.out.empty());
    CHECK(slurp(path) == to_stdout.out);

    const auto manifest = nlohmann::json::parse(slurp(path.string() + ".manifest.json"));
    CHECK(manifest["workers"] == 3);
    CHECK(manifest["config"]["modulation"] == "qpsk");
    CHECK(to_stdout.out.find(manifest["config_hash"].get<std::string>()) != std::string::npos);
}

TEST_CASE("sweep-n and sweep-q shapes") {
    const auto n = run({"sweep-n", "--snr", "10", "--n", "4,8", "--trials", "4", "--q", "3",
                        "--detectors", "eils"});
    REQUIRE(n.code == 0);
    CHECK(n.out.find("\n10,4,3,4,eils,") != std::string::npos);
    CHECK(n.out.find("\n10,8,3,4,eils,") != std::string::npos);

    const auto q = run({"sweep-q", "--snr", "10", "--q", "1,3,10", "--n", "6", "--trials", "4",
                        "--detectors", "eils"});
    REQUIRE(q.code == 0);
    CHECK(q.out.find("\n10,6,1,1,eils,") != std::string::npos);
    CHECK(q.out.find("\n10,6,3,2,eils,") != std::string::npos);
    CHECK(q.out.find("\n10,6,10,4,eils,") != std::string::npos);
}

TEST_CASE("worker count does not change the CSV body") {
    const std::vector<std::string> base{"sweep-snr", "--snr", "2,6", "--trials", "30", "--n", "10"};
    auto parallel = base;
    parallel.insert(parallel.end(), {"--workers", "5"});
    CHECK(body(run(base).out) == body(run(parallel).out));
}

TEST_CASE("histogram writes CSV and manifest") {
    const auto path = tmp("cli_hist.csv");
    fs::remove(path);
    const auto r = run({"histogram", "--preset", "text", "--runs", "50", "--bins", "5", "--out",
                        path.string()});
    REQUIRE(r.code == 0);
    const auto csv = slurp(path);
    CHECK(csv.find("kind,bin,bin_lo,bin_hi,count") != std::string::npos);
    const auto manifest = nlohmann::json::parse(slurp(path.string() + ".manifest.json"));
    CHECK(manifest["config"]["p_db"] == 6.0);

    const auto caption = run({"histogram", "--runs", "5", "--bins", "2"});
    CHECK(caption.code == 0);
    CHECK(caption.out.find("residual,1,") != std::string::npos);
}

TEST_CASE("decode-once") {
    RngStream rng(17);
    const auto& qpsk = Constellation::get(Modulation::qpsk);
    const auto burst = testing::make_burst(Modulation::qpsk, 20, 10.0, 0.0, rng);
    const auto path = tmp("cli_decode.txt");
    {
        std::ofstream f(path);
        f << "# noiseless 4 x N equivalent received matrix\n";
        write_matrix(f, burst.rx.equivalent);
    }
    const auto r = run({"decode-once", path.string(), "--mod", "qpsk", "--seed", "9"});
    REQUIRE(r.code == 0);

    std::istringstream is(r.out);
    std::string tag;
    std::string name;
    double residual = -1.0;
    is >> tag >> name >> residual;
    CHECK(name == "residual");
    CHECK(residual <= 1e-18);

    // The printed result is exactly the library result with the same stream.
    RngStream lib_rng(9, 0, StreamPurpose::eils);
    const auto lib = eils(burst.rx, qpsk, EilsConfig{}, lib_rng);
    CHECK(r.out.find("# residual " + format_real(lib.best.residual) + "\n") == 0);
    const auto pos = r.out.find("# stopped_by_majority");
    std::istringstream rest(r.out.substr(r.out.find('\n', pos) + 1));
    CHECK(read_matrix(rest) == lib.best.symbols);
    CHECK(best_rotation_errors(lib.best.symbols, burst.symbols, qpsk).errors.symbols == 0);

    const auto bad = tmp("cli_decode_bad.txt");
    {
        std::ofstream f(bad);
        f << "1+0j 2+0j\n3+0j\n";
    }
    const auto br = run({"decode-once", bad.string()});
    CHECK(br.code == 1);
    CHECK(br.err.find("line 2") != std::string::npos);

    const auto wrong_rows = tmp("cli_decode_rows.txt");
    {
        std::ofstream f(wrong_rows);
        f << "1+0j\n1+0j\n";
    }
    CHECK(run({"decode-once", wrong_rows.string()}).code == 1);
}
