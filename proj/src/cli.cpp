#include "multcover/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "multcover/cover.hpp"
#include "multcover/empirical.hpp"
#include "multcover/finecover.hpp"
#include "multcover/io.hpp"
#include "multcover/numeric.hpp"
#include "multcover/series.hpp"

namespace multcover {

namespace {

constexpr const char* kToolName = "multcover";
constexpr const char* kToolVersion = "0.1.0";
constexpr const char* kSchemaVersion = "1.0";

nlohmann::json make_report(const std::string& subcommand) {
    return nlohmann::json{{"schema_version", kSchemaVersion},
                          {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
                          {"subcommand", subcommand},
                          {"params", nlohmann::json::object()},
                          {"results", nlohmann::json::object()}};
}

std::vector<double> parse_theta(const std::string& text, int d) {
    std::vector<double> theta;
    if (text.empty())
        return std::vector<double>(static_cast<std::size_t>(d), 0.0);
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ','))
        theta.push_back([&] {
            try {
                std::size_t pos = 0;
                const double v = std::stod(piece, &pos);
                if (pos != piece.size())
                    throw std::invalid_argument(piece);
                return v;
            } catch (const std::exception&) {
                throw DomainError("cannot parse shift component '" + piece + "'");
            }
        }());
    if (static_cast<int>(theta.size()) != d)
        throw DomainError("shift has " + std::to_string(theta.size()) + " components, expected " +
                          std::to_string(d));
    return theta;
}

std::string u128_to_string(unsigned __int128 v) {
    if (v == 0)
        return "0";
    std::string digits;
    while (v != 0) {
        digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return digits;
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream file(path);
    if (!file)
        throw Error("cannot open '" + path + "' for writing");
    return file;
}

nlohmann::json theta_json(const std::vector<double>& theta) {
    return nlohmann::json(theta);
}

// ----- cover ----------------------------------------------------------------

struct CoverArgs {
    int d = 0;
    int N = 0;
    double s = 0.0;
    std::string dimfn;
    bool materialize = false;
    std::uint64_t cap = 10'000'000;
    std::string emit;
};

int run_cover(const CoverArgs& args, std::ostream& out) {
    const bool use_f = !args.dimfn.empty();
    const DimensionFunction f =
        use_f ? parse_dimension_function(args.dimfn) : DimensionFunction::power(args.s);
    const CoverCost cost = cover_cost(args.N, args.d, f);

    unsigned __int128 cube_total = 0;
    for (const auto& entry : cost.by_k_max)
        cube_total += static_cast<unsigned __int128>(entry.vector_count)
                      << entry.count_log2;

    nlohmann::json report = make_report("cover");
    report["params"] = {{"d", args.d},
                        {"N", args.N},
                        {"dimfn", dimension_function_to_json(f)},
                        {"materialize", args.materialize},
                        {"cap", args.cap}};
    nlohmann::json profile = nlohmann::json::array();
    for (const auto& entry : cost.by_k_max)
        profile.push_back({{"k_max", entry.k_max},
                           {"vectors", entry.vector_count},
                           {"count_log2", entry.count_log2},
                           {"contribution", static_cast<double>(entry.contribution)}});
    report["results"] = {{"cost_total", static_cast<double>(cost.total)},
                         {"cube_count_total", u128_to_string(cube_total)},
                         {"profile", profile}};

    if (args.materialize) {
        const auto cubes = materialize_cover(args.N, args.d, args.cap);
        report["results"]["materialized_count"] = cubes.size();
        if (!args.emit.empty()) {
            auto csv = open_csv(args.emit);
            for (int i = 1; i <= args.d; ++i)
                csv << "center_" << i << (i == args.d ? "" : ",");
            csv << ",side\n";
            for (const auto& cube : cubes) {
                for (int i = 0; i < args.d; ++i)
                    csv << cube.center[static_cast<std::size_t>(i)].to_string()
                        << (i == args.d - 1 ? "" : ",");
                csv << ",2^-" << cube.side_log2 << "\n";
            }
            report["results"]["emitted"] = args.emit;
        }
    }
    out << report.dump(2) << '\n';
    return 0;
}

// ----- cover-scan -----------------------------------------------------------

struct ScanArgs {
    int d = 0;
    double s = 0.0;
    int N_min = 0;
    int N_max = 0;
    std::string emit;
};

int run_cover_scan(const ScanArgs& args, std::ostream& out) {
    const ScalingReport rep = cost_scaling_report(args.d, args.s, args.N_min, args.N_max);
    nlohmann::json report = make_report("cover-scan");
    report["params"] = {{"d", args.d}, {"s", args.s}, {"N_min", args.N_min}, {"N_max", args.N_max}};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : rep.rows)
        rows.push_back({{"N", row.N},
                        {"cost", static_cast<double>(row.cost)},
                        {"ratio", static_cast<double>(row.ratio)},
                        {"slope_so_far", static_cast<double>(row.slope_so_far)}});
    nlohmann::json profile = nlohmann::json::array();
    for (const auto& entry : rep.profile)
        profile.push_back({{"k_max", entry.k_max},
                           {"vectors", entry.vector_count},
                           {"count_log2", entry.count_log2},
                           {"contribution", static_cast<double>(entry.contribution)}});
    report["results"] = {{"slope", static_cast<double>(rep.slope)},
                         {"ratio_sup", static_cast<double>(rep.ratio_sup)},
                         {"ratio_inf", static_cast<double>(rep.ratio_inf)},
                         {"rows", rows},
                         {"profile_at_N_max", profile}};
    if (!args.emit.empty()) {
        auto csv = open_csv(args.emit);
        csv << "N,cost,ratio,slope_so_far\n";
        csv.precision(17);
        for (const auto& row : rep.rows)
            csv << row.N << ',' << static_cast<double>(row.cost) << ','
                << static_cast<double>(row.ratio) << ',' << static_cast<double>(row.slope_so_far)
                << '\n';
        report["results"]["emitted"] = args.emit;
        out << report.dump(2) << '\n'; // re-dump with the emitted path included
        return 0;
    }
    out << report.dump(2) << '\n';
    return 0;
}

// ----- cost -----------------------------------------------------------------

struct CostArgs {
    std::string mode = "single";
    int d = 0;
    std::string psi;
    std::string dimfn;
    double s = 0.0;
    bool have_s = false;
    std::uint64_t Q = 0;
    std::string theta;
    std::string emit;
};

int run_cost(const CostArgs& args, std::ostream& out) {
    const ApproximatingFunction psi = parse_psi(args.psi, args.d, args.have_s ? std::optional<double>(args.s) : std::nullopt);
    const DimensionFunction f = !args.dimfn.empty() ? parse_dimension_function(args.dimfn)
                                                    : DimensionFunction::power(args.s);
    CostLedger ledger;
    std::vector<double> theta;
    if (args.mode == "single") {
        theta = parse_theta(args.theta, args.d);
        ledger = finecover_cost_truncated(psi, f, args.d, InhomogeneousShift(theta), args.Q);
    } else {
        ledger = doubly_metric_cost_truncated(psi, f, args.d, args.Q);
    }

    nlohmann::json report = make_report("cost");
    report["params"] = {{"mode", args.mode},
                        {"d", args.d},
                        {"psi", psi_to_json(psi)},
                        {"dimfn", dimension_function_to_json(f)},
                        {"Q", args.Q}};
    if (args.mode == "single")
        report["params"]["theta"] = theta_json(theta);
    report["results"] = {{"total", static_cast<double>(ledger.total)},
                         {"comparison_total", static_cast<double>(ledger.comparison_total)},
                         {"ratio", static_cast<double>(ledger.ratio())},
                         {"degenerate_rows", ledger.degenerate_rows},
                         {"divergent_trend", ledger.divergent_trend}};
    if (ledger.collapse_min) {
        report["results"]["collapse_min"] = static_cast<double>(*ledger.collapse_min);
        report["results"]["collapse_max"] = static_cast<double>(*ledger.collapse_max);
    }
    if (!args.emit.empty()) {
        auto csv = open_csv(args.emit);
        csv << "q,term,running_total,comparison_term,degenerate\n";
        csv.precision(17);
        for (const auto& row : ledger.rows)
            csv << row.q << ',' << static_cast<double>(row.term) << ','
                << static_cast<double>(row.running_total) << ','
                << static_cast<double>(row.comparison_term) << ',' << (row.degenerate ? 1 : 0)
                << '\n';
        report["results"]["emitted"] = args.emit;
    }
    out << report.dump(2) << '\n';
    return 0;
}

// ----- verdict ----------------------------------------------------------

struct VerdictArgs {
    std::string mode = "homogeneous";
    int d = 0;
    int m = 1;
    std::string psi;
    std::string dimfn;
    double s = 0.0;
    bool have_s = false;
    std::string theta;
    bool bare_json = false;
};

int run_verdict(const VerdictArgs& args, std::ostream& out) {
    VerdictRequest request;
    if (args.mode == "homogeneous")
        request.mode = SetupMode::homogeneous;
    else if (args.mode == "inhomogeneous")
        request.mode = SetupMode::inhomogeneous;
    else if (args.mode == "doubly")
        request.mode = SetupMode::doubly;
    else if (args.mode == "multivariable")
        request.mode = SetupMode::multivariable;
    else
        throw DomainError("unknown mode '" + args.mode + "'");
    request.d = args.d;
    request.m = args.m;
    request.psi = parse_psi(args.psi, args.d, args.have_s ? std::optional<double>(args.s) : std::nullopt);
    if (args.have_s && !args.dimfn.empty())
        throw DomainError("give either --s or --dimfn, not both");
    if (args.have_s)
        request.s = args.s;
    if (!args.dimfn.empty())
        request.f = parse_dimension_function(args.dimfn);

    const Verdict verdict = decide_measure(request);
    const nlohmann::json vjson = verdict_to_json(verdict);
    if (args.bare_json) {
        out << vjson.dump(2) << '\n';
        return 0;
    }
    nlohmann::json report = make_report("verdict");
    report["params"] = {{"mode", args.mode}, {"d", args.d}, {"m", args.m},
                        {"psi", psi_to_json(*request.psi)}};
    if (request.s)
        report["params"]["s"] = *request.s;
    if (request.f)
        report["params"]["dimfn"] = dimension_function_to_json(*request.f);
    if (!args.theta.empty())
        report["params"]["theta"] = theta_json(parse_theta(args.theta, args.d));
    report["results"] = vjson;
    out << report.dump(2) << '\n';
    return 0;
}

// ----- estimate ---------------------------------------------------------

struct EstimateArgs {
    std::string what;
    int d = 0;
    std::string psi;
    std::string x;
    std::string theta;
    std::uint64_t Q = 0;
    std::uint64_t Q1 = 0;
    std::uint64_t Q2 = 0;
    std::uint64_t samples = 100'000;
    int j_min = 0;
    int j_max = 0;
    std::uint64_t seed = 0;
    bool have_seed = false;
    std::uint64_t budget = 1ull << 30;
    std::string emit;
};

int run_estimate(const EstimateArgs& args, std::ostream& out) {
    const ApproximatingFunction psi = parse_psi(args.psi);
    const std::vector<double> theta = parse_theta(args.theta, args.d);
    nlohmann::json report = make_report("estimate");
    report["params"] = {{"what", args.what},
                        {"d", args.d},
                        {"psi", psi_to_json(psi)},
                        {"theta", theta_json(theta)}};

    if (args.what == "hits") {
        if (args.x.empty() || args.Q == 0)
            throw DomainError("estimate --what hits needs --x and --Q");
        const std::vector<double> x = parse_theta(args.x, args.d);
        const HitRecord rec = count_hits(x, theta, psi, args.Q);
        report["params"]["x"] = theta_json(x);
        report["params"]["Q"] = args.Q;
        nlohmann::json products = nlohmann::json::array();
        for (const long double p : rec.products)
            products.push_back(static_cast<double>(p));
        report["results"] = {{"count", rec.hits.size()}, {"hits", rec.hits},
                             {"products", products}};
        if (!args.emit.empty()) {
            auto csv = open_csv(args.emit);
            csv << "q,product\n";
            csv.precision(17);
            for (std::size_t i = 0; i < rec.hits.size(); ++i)
                csv << rec.hits[i] << ',' << static_cast<double>(rec.products[i]) << '\n';
            report["results"]["emitted"] = args.emit;
        }
    } else if (args.what == "tail") {
        if (args.Q1 == 0 || args.Q2 == 0)
            throw DomainError("estimate --what tail needs --Q1 and --Q2");
        if (!args.have_seed)
            throw DomainError("estimate --what tail is stochastic: --seed is required");
        const TailEstimate est =
            lebesgue_tail_estimate(psi, theta, args.d, args.Q1, args.Q2, args.samples, args.seed);
        report["params"]["Q1"] = args.Q1;
        report["params"]["Q2"] = args.Q2;
        report["params"]["samples"] = args.samples;
        report["params"]["seed"] = args.seed;
        report["results"] = {{"estimate", est.estimate}, {"ci_low", est.ci_low},
                             {"ci_high", est.ci_high}, {"hits", est.hits},
                             {"samples", est.samples}, {"seed", est.seed}};
        if (!args.emit.empty()) {
            auto csv = open_csv(args.emit);
            csv << "estimate,ci_low,ci_high,hits,samples,seed\n";
            csv.precision(17);
            csv << est.estimate << ',' << est.ci_low << ',' << est.ci_high << ',' << est.hits << ','
                << est.samples << ',' << est.seed << '\n';
            report["results"]["emitted"] = args.emit;
        }
    } else if (args.what == "boxdim") {
        if (args.Q1 == 0 || args.Q2 == 0 || args.j_min == 0 || args.j_max == 0)
            throw DomainError("estimate --what boxdim needs --Q1, --Q2, --j-min, --j-max");
        if (!args.have_seed)
            throw DomainError("estimate --what boxdim requires --seed (echoed into the report; "
                              "the marking rule itself is deterministic)");
        const BoxCountResult res = box_dimension_estimate(psi, theta, args.d, args.Q1, args.Q2,
                                                          args.j_min, args.j_max, args.budget);
        report["params"]["Q1"] = args.Q1;
        report["params"]["Q2"] = args.Q2;
        report["params"]["j_min"] = args.j_min;
        report["params"]["j_max"] = args.j_max;
        report["params"]["seed"] = args.seed;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : res.rows)
            rows.push_back({{"j", row.j}, {"count", row.count}});
        report["results"] = {{"dimension", res.dimension}, {"rows", rows},
                             {"seed_used", false}};
        if (!args.emit.empty()) {
            auto csv = open_csv(args.emit);
            csv << "j,count,log2_count\n";
            csv.precision(17);
            for (const auto& row : res.rows)
                csv << row.j << ',' << row.count << ','
                    << (row.count > 0 ? std::log2(static_cast<double>(row.count)) : 0.0) << '\n';
            report["results"]["emitted"] = args.emit;
        }
    } else {
        throw DomainError("unknown estimate kind '" + args.what + "' (use hits, tail, or boxdim)");
    }
    out << report.dump(2) << '\n';
    return 0;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dyadic cover costs, series verdicts, and desk-scale estimates for "
                 "multiplicative Diophantine approximation"};
    app.name(kToolName);
    app.require_subcommand(1);

    CoverArgs cover_args;
    auto* cover_cmd = app.add_subcommand("cover", "Build and cost one dyadic cover of the "
                                                  "hyperbolic region at radius 2^-N");
    cover_cmd->add_option("--d", cover_args.d, "Ambient dimension (>= 2)")->required();
    cover_cmd->add_option("--N", cover_args.N, "Radius exponent: r = 2^-N")->required();
    cover_cmd->add_option("--s", cover_args.s, "Cost exponent: each cube costs side^s");
    cover_cmd->add_option("--dimfn", cover_args.dimfn, "Cost function, e.g. x^1.5*log^1");
    cover_cmd->add_flag("--materialize", cover_args.materialize, "Also build the explicit cube list");
    cover_cmd->add_option("--cap", cover_args.cap, "Maximum cubes to materialize");
    cover_cmd->add_option("--emit", cover_args.emit, "Write the cube list to this CSV path");

    ScanArgs scan_args;
    auto* scan_cmd = app.add_subcommand("cover-scan", "Cover costs across a radius range with the "
                                                      "scaling-law fit");
    scan_cmd->add_option("--d", scan_args.d, "Ambient dimension (>= 2)")->required();
    scan_cmd->add_option("--s", scan_args.s, "Cost exponent")->required();
    scan_cmd->add_option("--N-min", scan_args.N_min, "Smallest radius exponent")->required();
    scan_cmd->add_option("--N-max", scan_args.N_max, "Largest radius exponent")->required();
    scan_cmd->add_option("--emit", scan_args.emit, "Write N,cost,ratio,slope_so_far CSV here");

    CostArgs cost_args;
    auto* cost_cmd = app.add_subcommand("cost", "Accumulate truncated fine-cover costs against the "
                                                "comparison sum");
    cost_cmd->add_option("--mode", cost_args.mode, "single (one metric) or double (doubly metric)")
        ->check(CLI::IsMember({"single", "double"}));
    cost_cmd->add_option("--d", cost_args.d, "Ambient dimension (>= 2)")->required();
    cost_cmd->add_option("--psi", cost_args.psi, "Approximating function, e.g. q^-3")->required();
    cost_cmd->add_option("--dimfn", cost_args.dimfn, "Dimension function, e.g. x^1.6");
    auto* cost_s = cost_cmd->add_option("--s", cost_args.s, "Pure-power dimension function exponent");
    cost_cmd->add_option("--Q", cost_args.Q, "Truncation: accumulate q = 1..Q")->required();
    cost_cmd->add_option("--theta", cost_args.theta, "Shift components, e.g. 0.5,0.3 (single mode)");
    cost_cmd->add_option("--emit", cost_args.emit, "Write the per-q ledger CSV here");

    VerdictArgs verdict_args;
    auto* verdict_cmd = app.add_subcommand("verdict", "Classify the governing series and report the "
                                                      "measure dichotomy");
    verdict_cmd->add_option("--mode", verdict_args.mode,
                            "homogeneous, inhomogeneous, doubly, or multivariable");
    verdict_cmd->add_option("--d", verdict_args.d, "Ambient dimension (>= 2)")->required();
    verdict_cmd->add_option("--m", verdict_args.m, "Approximation variables (multivariable mode)");
    verdict_cmd->add_option("--psi", verdict_args.psi, "Approximating function")->required();
    auto* verdict_s = verdict_cmd->add_option("--s", verdict_args.s, "Hausdorff exponent");
    verdict_cmd->add_option("--dimfn", verdict_args.dimfn, "Dimension function");
    verdict_cmd->add_option("--theta", verdict_args.theta, "Shift (echoed; the dichotomy is "
                                                           "shift-uniform)");
    verdict_cmd->add_flag("--json", verdict_args.bare_json, "Print only the verdict object");

    EstimateArgs est_args;
    auto* est_cmd = app.add_subcommand("estimate", "Desk-scale empirical checks: hit counts, "
                                                   "Lebesgue tails, box-counting dimension");
    est_cmd->add_option("--what", est_args.what, "hits, tail, or boxdim")->required();
    est_cmd->add_option("--d", est_args.d, "Ambient dimension")->required();
    est_cmd->add_option("--psi", est_args.psi, "Approximating function")->required();
    est_cmd->add_option("--x", est_args.x, "Point coordinates for hit counting, e.g. 0.5,0.5");
    est_cmd->add_option("--theta", est_args.theta, "Shift components");
    est_cmd->add_option("--Q", est_args.Q, "Hit-count horizon");
    est_cmd->add_option("--Q1", est_args.Q1, "Window start");
    est_cmd->add_option("--Q2", est_args.Q2, "Window end");
    est_cmd->add_option("--samples", est_args.samples, "Monte Carlo sample count");
    est_cmd->add_option("--j-min", est_args.j_min, "Coarsest resolution exponent");
    est_cmd->add_option("--j-max", est_args.j_max, "Finest resolution exponent");
    auto* est_seed = est_cmd->add_option("--seed", est_args.seed, "RNG seed (stochastic estimates)");
    est_cmd->add_option("--budget", est_args.budget, "Memory budget in bytes for box counting");
    est_cmd->add_option("--emit", est_args.emit, "Write plot-ready CSV here");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back(kToolName);
    for (const auto& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 64;
    }

    try {
        cost_args.have_s = cost_s->count() > 0;
        verdict_args.have_s = verdict_s->count() > 0;
        est_args.have_seed = est_seed->count() > 0;
        if (cover_cmd->parsed()) {
            if (cover_args.dimfn.empty() && cover_cmd->count("--s") == 0)
                throw DomainError("cover needs --s or --dimfn");
            return run_cover(cover_args, out);
        }
        if (scan_cmd->parsed())
            return run_cover_scan(scan_args, out);
        if (cost_cmd->parsed()) {
            if (!cost_args.have_s && cost_args.dimfn.empty())
                throw DomainError("cost needs --s or --dimfn");
            if (cost_args.have_s && !cost_args.dimfn.empty())
                throw DomainError("give either --s or --dimfn, not both");
            if (cost_args.mode == "double" && !cost_args.theta.empty())
                throw DomainError("the doubly metric setup has no fixed shift; drop --theta");
            return run_cost(cost_args, out);
        }
        if (verdict_cmd->parsed())
            return run_verdict(verdict_args, out);
        if (est_cmd->parsed())
            return run_estimate(est_args, out);
        err << "no subcommand selected\n";
        return 64;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace multcover
