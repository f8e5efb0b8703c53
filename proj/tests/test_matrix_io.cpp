#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "blind_stbc/matrix_io.hpp"
#include "test_support.hpp"

using namespace blind_stbc;

TEST_CASE("format_complex / parse_complex round-trip bit-exactly") {
    CHECK(format_complex({0.5, -1.25}) == "0.5-1.25j");
    CHECK(format_complex({-2.0, 0.0}) == "-2+0j");

    RngStream rng(31);
    for (int k = 0; k < 5000; ++k) {
        // Spread magnitudes over many decades so exponents show up in the text.
        const double scale = std::pow(10.0, static_cast<double>(rng.uniform_index(41)) - 20.0);
        const Complex z = scale * rng.complex_gaussian(1.0);
        const auto back = parse_complex(format_complex(z));
        REQUIRE(back.has_value());
        CHECK(back->real() == z.real());
        CHECK(back->imag() == z.imag());
    }

    const double tiny = std::numeric_limits<double>::denorm_min();
    CHECK(parse_complex(format_complex({tiny, -tiny})) == Complex(tiny, -tiny));
}

TEST_CASE("parse_complex accepts signs and exponents") {
    CHECK(parse_complex("1+2j") == Complex(1.0, 2.0));
    CHECK(parse_complex("+1-2j") == Complex(1.0, -2.0));
    CHECK(parse_complex("-1.5e-3+4E2j") == Complex(-1.5e-3, 400.0));
    CHECK(parse_complex("0+0j") == Complex(0.0, 0.0));
}

TEST_CASE("parse_complex rejects malformed and non-finite tokens") {
    for (const char* bad : {"", "j", "1", "1+2", "1+j", "1++2j", "1+2jj", "abc", "1 +2j", "1+2i",
                            "nan+0j", "0+infj", "inf-1j", "1e999+0j", "--1+2j"}) {
        CAPTURE(bad);
        CHECK_FALSE(parse_complex(bad).has_value());
    }
}

TEST_CASE("read_matrix / write_matrix") {
    RngStream rng(5);
    const auto m = testing::random_matrix(4, 7, rng);
    std::stringstream ss;
    write_matrix(ss, m);
    CHECK(read_matrix(ss) == m);

    std::istringstream with_comments("# header\n\n  1+0j   0-1j\n\t# note\n2+2j -3+0j\r\n");
    CHECK(read_matrix(with_comments) == ComplexMatrix{{1.0, {0.0, -1.0}}, {{2.0, 2.0}, -3.0}});
}

TEST_CASE("read_matrix reports line and column of bad input") {
    std::istringstream bad_token("1+0j 1+0j\n# c\n1+0j 1+xj\n");
    try {
        read_matrix(bad_token);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 6);
        CHECK(std::string(e.what()).starts_with("line 3, column 6:"));
    }

    std::istringstream ragged("1+0j 2+0j\n3+0j\n");
    try {
        read_matrix(ragged);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }

    std::istringstream non_finite("nan+0j\n");
    CHECK_THROWS_AS(read_matrix(non_finite), ParseError);

    std::istringstream empty("# nothing\n\n");
    CHECK_THROWS_AS(read_matrix(empty), ParseError);
}
