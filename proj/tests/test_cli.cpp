#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "multcover/cli.hpp"
#include "multcover/errors.hpp"
#include "multcover/io.hpp"

using namespace multcover;
using nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    RunResult r;
    r.code = dispatch(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

} // namespace

TEST_CASE("parse_psi shorthand, JSON, and gap forms") {
    const auto p1 = parse_psi("q^-2");
    CHECK(p1.power() == 2.0);
    CHECK(p1.log_power() == 0.0);
    CHECK(p1.scale() == 1.0);

    const auto p2 = parse_psi("0.5*q^-1.5*log^-1");
    CHECK(p2.scale() == 0.5);
    CHECK(p2.power() == 1.5);
    CHECK(p2.log_power() == 1.0);

    const auto p3 = parse_psi(R"({"kind":"psi","c":2.0,"a":3.0,"b":1.0})");
    CHECK(p3.scale() == 2.0);
    CHECK(p3.power() == 3.0);
    CHECK(p3.log_power() == 1.0);

    // Gap family: exponents (d-s+1)/sigma and alpha/sigma.
    const auto gap = parse_psi("gap:alpha=1.5", 3, 2.5);
    CHECK(gap.power() == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(gap.log_power() == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_THROWS_AS(parse_psi("gap:alpha=1.5"), DomainError);
    CHECK_THROWS_AS(parse_psi("gap:alpha=1.5", 3, 3.5), OutOfRangeError);
    CHECK_THROWS_AS(parse_psi("nonsense^^"), DomainError);
}

TEST_CASE("psi JSON round trip") {
    const auto psi = parse_psi("0.25*q^-2.5*log^1.5");
    const auto back = parse_psi(psi_to_json(psi).dump());
    CHECK(back.scale() == psi.scale());
    CHECK(back.power() == psi.power());
    CHECK(back.log_power() == psi.log_power());
}

TEST_CASE("parse_dimension_function shorthand and JSON") {
    const auto f1 = parse_dimension_function("x^1.6");
    CHECK(f1.s() == 1.6);
    CHECK(f1.pure_power());
    const auto f2 = parse_dimension_function("x^1.5*log^2*loglog^-1");
    CHECK(f2.s() == 1.5);
    CHECK(f2.alpha() == 2.0);
    CHECK(f2.beta() == -1.0);
    const auto f3 = parse_dimension_function(R"({"kind":"f","s":1.7,"alpha":0.5,"beta":0.0})");
    CHECK(f3.s() == 1.7);
    CHECK(f3.alpha() == 0.5);
    const auto back = parse_dimension_function(dimension_function_to_json(f2).dump());
    CHECK(back.s() == f2.s());
    CHECK(back.alpha() == f2.alpha());
    CHECK(back.beta() == f2.beta());
    CHECK_THROWS_AS(parse_dimension_function("log^2"), DomainError);
    CHECK_THROWS_AS(parse_dimension_function("2*x^1.5"), DomainError);
}

TEST_CASE("dispatch: empty arguments print usage and exit 64") {
    const RunResult r = run({});
    CHECK(r.code == 64);
}

TEST_CASE("dispatch: verdict --json emits the bare verdict object") {
    const RunResult r = run({"verdict", "--d", "2", "--psi", "q^-2", "--s", "1.7", "--json"});
    REQUIRE(r.code == 0);
    const json v = json::parse(r.out);
    CHECK(v.at("value") == "Zero");
    CHECK(v.at("measure_kind") == "Hausdorff_s");
    CHECK(v.at("dim_H").get<double>() == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(v.at("dim_exact") == true);
    bool saw_main = false;
    for (const auto& entry : v.at("series")) {
        if (entry.at("name") == "hausdorff_sum") {
            saw_main = true;
            CHECK(entry.at("classification") == "Convergent");
            CHECK(entry.at("mode") == "exact");
        }
    }
    CHECK(saw_main);
}

TEST_CASE("dispatch: full report envelope carries schema, tool, params, results") {
    const RunResult r = run({"verdict", "--d", "2", "--psi", "q^-1"});
    REQUIRE(r.code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep.at("schema_version") == "1.0");
    CHECK(rep.at("tool").at("name") == "multcover");
    CHECK(rep.at("subcommand") == "verdict");
    CHECK(rep.at("params").at("psi").at("a") == 1.0);
    CHECK(rep.at("results").at("value") == "One");
}

TEST_CASE("dispatch: cover --materialize matches the frozen four-cube case") {
    const RunResult r = run({"cover", "--d", "2", "--s", "1.5", "--N", "2", "--materialize"});
    REQUIRE(r.code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep.at("results").at("materialized_count") == 4);
    CHECK(rep.at("results").at("cost_total").get<double>() == doctest::Approx(4.0));
    CHECK(rep.at("results").at("cube_count_total") == "4");
}

TEST_CASE("dispatch: cover rejects missing cost function with exit 2") {
    const RunResult r = run({"cover", "--d", "2", "--N", "5"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--s or --dimfn") != std::string::npos);
}

TEST_CASE("dispatch: unknown flags exit 64") {
    const RunResult r = run({"cover", "--d", "2", "--N", "5", "--s", "1.5", "--bogus"});
    CHECK(r.code == 64);
}

TEST_CASE("dispatch: domain errors map to exit 2") {
    CHECK(run({"verdict", "--d", "2", "--psi", "q^-2", "--s", "2.0"}).code == 2);
    CHECK(run({"verdict", "--d", "2", "--psi", "zzz"}).code == 2);
    CHECK(run({"cost", "--mode", "double", "--d", "2", "--psi", "q^-3", "--s", "1.6", "--Q", "10",
               "--theta", "0,0"})
              .code == 2);
    CHECK(run({"estimate", "--what", "tail", "--d", "2", "--psi", "q^-2", "--Q1", "2", "--Q2",
               "20"})
              .code == 2); // stochastic estimate without --seed
}

TEST_CASE("dispatch: cost emits a CSV ledger") {
    const std::string path = "test_ledger_out.csv";
    const RunResult r = run({"cost", "--mode", "single", "--d", "2", "--psi", "q^-3", "--s", "1.6",
                             "--Q", "12", "--emit", path});
    REQUIRE(r.code == 0);
    std::ifstream csv(path);
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "q,term,running_total,comparison_term,degenerate");
    int rows = 0;
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty())
            ++rows;
    CHECK(rows == 12);
    csv.close();
    std::remove(path.c_str());
}

TEST_CASE("dispatch: estimate tail reproduces bit-for-bit from echoed params") {
    const RunResult first = run({"estimate", "--what", "tail", "--d", "2", "--psi", "q^-2",
                                 "--theta", "0.3,0.7", "--Q1", "5", "--Q2", "50", "--samples",
                                 "20000", "--seed", "12345"});
    REQUIRE(first.code == 0);
    const json rep = json::parse(first.out);
    const json params = rep.at("params");
    // Re-run from the canonical parameter echo.
    std::vector<std::string> args{"estimate",
                                  "--what",
                                  params.at("what").get<std::string>(),
                                  "--d",
                                  std::to_string(params.at("d").get<int>()),
                                  "--psi",
                                  params.at("psi").dump(),
                                  "--theta",
                                  "0.3,0.7",
                                  "--Q1",
                                  std::to_string(params.at("Q1").get<std::uint64_t>()),
                                  "--Q2",
                                  std::to_string(params.at("Q2").get<std::uint64_t>()),
                                  "--samples",
                                  std::to_string(params.at("samples").get<std::uint64_t>()),
                                  "--seed",
                                  std::to_string(params.at("seed").get<std::uint64_t>())};
    const RunResult second = run(args);
    REQUIRE(second.code == 0);
    const json rep2 = json::parse(second.out);
    CHECK(rep.at("results") == rep2.at("results"));
}

TEST_CASE("dispatch: estimate hits CSV and JSON agree") {
    const RunResult r = run({"estimate", "--what", "hits", "--d", "2", "--psi", "q^-2", "--x",
                             "0.5,0.5", "--Q", "10"});
    REQUIRE(r.code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep.at("results").at("hits") == json::array({2, 4, 6, 8, 10}));
    CHECK(rep.at("results").at("count") == 5);
}

TEST_CASE("dispatch: cover-scan reports slope and ratio band") {
    const RunResult r = run({"cover-scan", "--d", "2", "--s", "1.5", "--N-min", "2", "--N-max",
                             "12"});
    REQUIRE(r.code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep.at("results").at("rows").size() == 11);
    CHECK(rep.at("results").at("slope").get<double>() > 0.0);
    CHECK(rep.at("results").at("ratio_sup").get<double>() >=
          rep.at("results").at("ratio_inf").get<double>());
}
