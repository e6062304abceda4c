#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "weakamp/sweep.hpp"

using weakamp::ConfigParse;
using weakamp::SweepSpec;
using Catch::Approx;

namespace {

SweepSpec parse(const std::string& text) {
    std::istringstream in(text);
    return weakamp::parse_sweep_config(in);
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<double> row_values(const std::string& line) {
    std::vector<double> vals;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');)
        vals.push_back(std::stod(cell));
    return vals;
}

const char* kMinimal =
    "k = 0.005\n"
    "alpha_abs = 0.5\n"
    "theta = 0\n"
    "wt_start = 0\n"
    "wt_stop = 1\n"
    "wt_count = 5\n"
    "outputs = q_closed\n";

}  // namespace

TEST_CASE("minimal config parses", "[sweep]") {
    const SweepSpec spec = parse(kMinimal);
    REQUIRE(spec.params.size() == 1);
    REQUIRE(spec.params[0].k == 0.005);
    REQUIRE(spec.params[0].alpha_abs == 0.5);
    REQUIRE(spec.params[0].gamma == 0.0);
    REQUIRE(spec.wt_count == 5);
    REQUIRE(spec.outputs == std::vector<std::string>{"q_closed"});
    REQUIRE_FALSE(spec.oracle);
}

TEST_CASE("comments, blanks, and lists", "[sweep]") {
    const SweepSpec spec = parse(
        "# reference sets\n"
        "k = 0.005\n"
        "\n"
        "alpha_abs = 0.5, 1.0, 2.0   # three sets\n"
        "theta = 0, 1.0471975511965976, 1.3089969389957472\n"
        "wt_start = 0\nwt_stop = 12.566370614359172\nwt_count = 21\n"
        "outputs = q_closed, prob\n");
    REQUIRE(spec.params.size() == 3);
    REQUIRE(spec.params[1].alpha_abs == 1.0);
    REQUIRE(spec.params[2].theta == Approx(1.3089969389957472));
    // Scalar k broadcasts across the three sets.
    for (const auto& p : spec.params) REQUIRE(p.k == 0.005);
}

TEST_CASE("config rejection diagnostics carry line numbers", "[sweep]") {
    auto expect_throw = [](const std::string& text, const std::string& needle) {
        try {
            parse(text);
            FAIL("expected ConfigParse for: " << needle);
        } catch (const ConfigParse& e) {
            REQUIRE_THAT(std::string(e.what()),
                         Catch::Matchers::ContainsSubstring(needle));
        }
    };

    expect_throw("k 0.005\n", "key = value");
    expect_throw("k = 0.005\nk = 0.01\n", "duplicate");
    expect_throw("banana = 1\n", "unknown key");
    expect_throw(std::string(kMinimal) + "outputs = q_damped\n", "duplicate");
    expect_throw(
        "k = 0.005\nalpha_abs = 0.5\ntheta = 0\n"
        "wt_start = 0\nwt_stop = 1\nwt_count = 5\noutputs = q_damped\n",
        "gamma");
    expect_throw(
        "k = 0.005\nalpha_abs = 0.5\ntheta = 0\n"
        "wt_start = 0\nwt_stop = 1\nwt_count = 1\noutputs = q_closed\n",
        "wt_count");
    expect_throw(
        "k = 0.005\nalpha_abs = 0.5\ntheta = 0\n"
        "wt_start = 2\nwt_stop = 1\nwt_count = 5\noutputs = q_closed\n",
        "wt_start");
    expect_throw(
        "k = 0.005\nalpha_abs = 0.5\ntheta = 0\n"
        "wt_start = 0\nwt_stop = 1\nwt_count = 5\noutputs = q_bogus\n",
        "unknown output");
    expect_throw(
        "k = 0.005\nalpha_abs = 0.5, 1.0\ntheta = 0, 0.1, 0.2\n"
        "wt_start = 0\nwt_stop = 1\nwt_count = 5\noutputs = q_closed\n",
        "must be 1 or");
    expect_throw("k = 0.005\nalpha_abs = 0.5\ntheta = 0\n"
                 "wt_start = 0\nwt_stop = 1\nwt_count = 2.5\noutputs = q_closed\n",
                 "integer");
    expect_throw(std::string(kMinimal) + "oracle = banana\n", "oracle");
    expect_throw("alpha_abs = 0.5\ntheta = 0\n"
                 "wt_start = 0\nwt_stop = 1\nwt_count = 5\noutputs = q_closed\n",
                 "missing key 'k'");
}

TEST_CASE("single-set sweep emits the minimal header", "[sweep]") {
    std::ostringstream os;
    weakamp::run_sweep(parse(kMinimal), os);
    const auto lines = lines_of(os.str());
    REQUIRE(lines.size() == 6);  // header + 5 rows
    REQUIRE(lines[0] == "omega_m_t,q_over_sigma");

    // wt = 0 row carries the analytic limit 4u/(1+4u^2), u = 1/2.
    const auto first = row_values(lines[1]);
    REQUIRE(first[0] == 0.0);
    REQUIRE(first[1] == Approx(1.0).margin(1e-15));

    // Rows ordered by wt; grid endpoints inclusive.
    const auto last = row_values(lines[5]);
    REQUIRE(last[0] == 1.0);
}

TEST_CASE("multi-set sweep gains a param_index column", "[sweep]") {
    std::ostringstream os;
    weakamp::run_sweep(parse("k = 0.005\nalpha_abs = 0.5, 1.0\ntheta = 0\n"
                             "wt_start = 0\nwt_stop = 1\nwt_count = 3\n"
                             "outputs = q_closed, prob\n"),
                       os);
    const auto lines = lines_of(os.str());
    REQUIRE(lines[0] == "param_index,omega_m_t,q_over_sigma,prob");
    REQUIRE(lines.size() == 7);  // header + 2 sets x 3 rows
    REQUIRE(row_values(lines[1])[0] == 0.0);
    REQUIRE(row_values(lines[4])[0] == 1.0);  // second set starts after the first
}

TEST_CASE("sweep output is deterministic", "[sweep]") {
    const std::string cfg =
        "k = 0.005\nalpha_abs = 1.0\ntheta = 0.5\ngamma = 0.005\n"
        "wt_start = 0\nwt_stop = 6.0\nwt_count = 9\n"
        "outputs = q_damped, p_damped, prob\n";
    std::ostringstream a, b;
    weakamp::run_sweep(parse(cfg), a);
    weakamp::run_sweep(parse(cfg), b);
    REQUIRE(a.str() == b.str());
    REQUIRE(a.str().find("q_damped") != std::string::npos);
}

TEST_CASE("full-precision round trip", "[sweep]") {
    for (double v : {1.0 / 3.0, 0.9999995872430462, 2.5000917059037064e-05})
        REQUIRE(std::stod(weakamp::detail::fmt(v)) == v);
}

TEST_CASE("oracle columns carry small deltas", "[sweep]") {
    std::ostringstream os;
    weakamp::run_sweep(parse("k = 0.005\nalpha_abs = 0.5\ntheta = 0\n"
                             "wt_start = 0\nwt_stop = 0.6\nwt_count = 4\n"
                             "outputs = q_closed\noracle = true\n"),
                       os);
    const auto lines = lines_of(os.str());
    REQUIRE(lines[0] == "omega_m_t,q_over_sigma,q_oracle,delta_q");
    for (size_t j = 1; j < lines.size(); ++j) {
        const auto row = row_values(lines[j]);
        REQUIRE(row.size() == 4);
        REQUIRE(std::abs(row[3]) < 1e-6);          // oracle agrees
        REQUIRE(row[2] == Approx(row[1] + row[3]));  // delta is consistent
    }
}
