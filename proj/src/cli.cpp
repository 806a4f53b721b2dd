#include "thicksum/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "thicksum/errors.hpp"
#include "thicksum/fragmentation.hpp"
#include "thicksum/halfline.hpp"
#include "thicksum/json_io.hpp"
#include "thicksum/phase_scan.hpp"
#include "thicksum/properties.hpp"
#include "thicksum/thickness.hpp"

namespace thicksum {

namespace {

constexpr const char* kSchemas = R"(JSON inputs (rationals are strings "p/q", decimal strings, or integers):
  set:           {"parts": [["0","4"], ["5","9"]]}  or the bare array [[0,4],[5,9]]
  function:      {"kind": "identity"}
                 {"kind": "power", "m": "2"}
                 {"kind": "exp", "r": "1/2"}
                 {"kind": "stretched_exp", "a": "1", "b": "1/2"}          e^{a x^b}
                 {"kind": "pwa", "points": [[0,1],[1,3]], "final_slope": "2"}
                 {"kind": "pwa", "points": [[0,0],[1,1]], "periodic": [["1","2"],["1","1/2"]]}
                 {"kind": "sum", "terms": [{"coeff": "3", "fn": <function>}, ...]}
                 {"kind": "product", "factors": [<function>, <function>]}
  fragmentation: {"fragments": [<set>, ...], "tail": {"kind": "translate", "period": "3/2"}}
                 {"generator": "FAa", "A": "1", "a": "1", "N": 40}
                 {"generator": "cantor", "A": "1", "a": "1/2", "alpha": "1/5", "depth": 3, "N": 40}
Environment: THICKSUM_PRECISION sets the default precision (bits, >= 16).
Exit status: 0 for every completed computation (including negative verdicts),
1 when selftest finds a failing property, 2 on errors (reported as JSON).)";

Rational req(const std::optional<Rational>& v, const char* name) {
    if (!v) throw DomainError(std::string("missing required option --") + name);
    return *v;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

OutputFormat fmt(const RunConfig& c, OutputFormat fallback) { return c.format.value_or(fallback); }

const std::string& input(const RunConfig& c, std::size_t i, const char* what) {
    if (c.inputs.size() <= i) throw DomainError(std::string("missing input file: ") + what);
    return c.inputs[i];
}

int cmd_tau(const RunConfig& c, std::ostream& out) {
    IntervalUnion k = set_from_json(load_json_file(input(c, 0, "set")));
    ThicknessValue t = c.brute ? tau_bruteforce(k) : tau(k);
    if (fmt(c, OutputFormat::Text) == OutputFormat::Text)
        out << to_string(t) << "\n";
    else
        emit(out, Json{{"set", to_json(k)}, {"tau", to_json(t)}, {"presentation", c.brute ? "brute" : "canonical"}});
    return 0;
}

int cmd_sum(const RunConfig& c, std::ostream& out) {
    IntervalUnion a = set_from_json(load_json_file(input(c, 0, "first set")));
    IntervalUnion b = c.inputs.size() > 1 ? set_from_json(load_json_file(c.inputs[1])) : a;
    IntervalUnion s = minkowski_sum(a, b);
    if (fmt(c, OutputFormat::Json) == OutputFormat::Text)
        out << to_string(s) << "\n";
    else
        emit(out, to_json(s));
    return 0;
}

int cmd_lambda(const RunConfig& c, std::ostream& out) {
    AdmissibleFunction g = function_from_json(load_json_file(input(c, 0, "function")));
    LambdaEstimate e = c.M ? lambda(g, c.gamma, *c.M, c.precision) : lambda_limit(g, c.gamma, c.precision);
    if (fmt(c, OutputFormat::Json) == OutputFormat::Text) {
        out << to_string(e) << "\n";
        return 0;
    }
    Json j{{"function", to_json(g)}, {"gamma", to_json(c.gamma)}, {"lambda", to_json(e)}};
    j["M"] = c.M ? to_json(*c.M) : Json("limit");
    emit(out, j);
    return 0;
}

int cmd_classify(const RunConfig& c, std::ostream& out) {
    AdmissibleFunction g = function_from_json(load_json_file(input(c, 0, "function")));
    RelativeVariation cls = classify(g, c.gamma, c.precision);
    if (fmt(c, OutputFormat::Text) == OutputFormat::Text)
        out << to_string(cls) << "\n";
    else
        emit(out, Json{{"function", to_json(g)}, {"class", to_string(cls)},
                       {"lambda_limit", to_json(lambda_limit(g, c.gamma, c.precision))}});
    return 0;
}

int cmd_certify(const RunConfig& c, std::ostream& out) {
    Fragmentation f = fragmentation_from_json(load_json_file(input(c, 0, "fragmentation")));
    if (c.thick.has_value() == c.sparse.has_value())
        throw DomainError("certify needs exactly one of --thick A,a,tau and --sparse a");
    if (c.thick) {
        std::vector<std::string> parts;
        std::stringstream ss(*c.thick);
        for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
        if (parts.size() != 3) throw ParseError("--thick expects A,a,tau");
        emit(out, to_json(certify_thick(f, parse_rational(parts[0]), parse_rational(parts[1]),
                                        parse_extended(parts[2]), c.skip)));
    } else {
        emit(out, to_json(certify_sparse(f, *c.sparse)));
    }
    return 0;
}

int cmd_halfline(const RunConfig& c, std::ostream& out) {
    if (c.frag_path.empty() || c.fn_path.empty()) throw DomainError("halfline needs --frag and --fn");
    Fragmentation f = fragmentation_from_json(load_json_file(c.frag_path), c.frag_path);
    AdmissibleFunction g = function_from_json(load_json_file(c.fn_path), c.fn_path);
    Rational horizon = c.horizon.value_or(Rational(1000));
    if (c.mode == "chain") {
        emit(out, to_json(chain_certify(f, g, ChainParams{req(c.A, "A"), req(c.a, "a"), c.eps, c.skip}, horizon,
                                        c.precision)));
    } else if (c.mode == "bigtau") {
        emit(out, to_json(chain_certify_bigtau(f, g, BigTauParams{req(c.A, "A"), req(c.a, "a"), req(c.R, "R"),
                                                                  req(c.tau, "tau")},
                                               horizon, c.precision)));
    } else if (c.mode == "refute") {
        if (c.fold < 2) throw DomainError("--fold must be at least 2");
        EnvelopeFactor env = envelope_factor(f, g, c.witnesses + 2);
        emit(out, to_json(stratum_refute(EnvelopeData(c.fold, env), c.witnesses)));
    } else if (c.mode == "exact") {
        emit(out, to_json(sum_coverage_for(f, g, c.from, horizon, c.precision)));
    } else {
        throw DomainError("unknown --mode \"" + c.mode + "\" (chain, bigtau, refute, exact)");
    }
    return 0;
}

Json scan_json(const std::vector<ScanRow>& rows, bool runtime) {
    Json arr = Json::array();
    for (const auto& r : rows) {
        Json j{{"r", to_json(r.r)},
               {"a", to_json(r.a)},
               {"ra", to_json(Rational(r.r * r.a))},
               {"exp_ra", Json::array({to_json(r.ra_exp.lo), to_json(r.ra_exp.hi)})},
               {"exp_ra_width", to_json(r.ra_exp.width())},
               {"ra_vs_log2", to_string(r.ra_vs_log2)},
               {"a_large", r.a_large},
               {"verdict", to_string(r.verdict)},
               {"n0_or_N0", r.n0_or_N0 ? Json(*r.n0_or_N0) : Json(nullptr)},
               {"first_gap", r.first_gap ? to_json(*r.first_gap) : Json(nullptr)},
               {"note", r.note}};
        if (runtime) j["runtime_ms"] = r.runtime_ms;
        arr.push_back(std::move(j));
    }
    return arr;
}

int cmd_phase_scan(const RunConfig& c, std::ostream& out) {
    ScanConfig cfg;
    cfg.A = req(c.A, "A");
    if (c.r_grid.empty() || c.a_grid.empty()) throw DomainError("phase-scan needs --r-grid and --a-grid");
    cfg.r_grid = parse_grid(c.r_grid);
    cfg.a_grid = parse_grid(c.a_grid);
    cfg.fragments = c.fragments;
    cfg.threads = c.threads;
    auto rows = phase_scan(cfg);
    if (fmt(c, OutputFormat::Csv) == OutputFormat::Json)
        emit(out, scan_json(rows, !c.no_runtime));
    else
        out << scan_csv(rows, !c.no_runtime);
    return 0;
}

int cmd_selftest(const RunConfig& c, std::ostream& out) {
    SuiteOptions opts{c.seed, c.cases, c.inject_fault};
    auto results = run_properties(c.only, opts);
    std::size_t failed = 0;
    for (const auto& r : results)
        if (!r.passed()) ++failed;
    if (fmt(c, OutputFormat::Text) == OutputFormat::Json) {
        Json arr = Json::array();
        for (const auto& r : results)
            arr.push_back(Json{{"name", r.name},
                               {"cases", r.cases},
                               {"failures", r.failures},
                               {"passed", r.passed()},
                               {"counterexample", r.counterexample}});
        emit(out, Json{{"seed", c.seed}, {"results", arr}, {"passed", results.size() - failed},
                       {"failed", failed}});
    } else {
        for (const auto& r : results) {
            out << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases";
            if (r.failures) out << ", " << r.failures << " failing";
            out << ")\n";
            if (!r.counterexample.empty()) out << "  counterexample: " << r.counterexample << "\n";
        }
        out << "seed " << c.seed << ": " << results.size() - failed << " passed, " << failed << " failed\n";
    }
    return failed ? 1 : 0;
}

const char* error_kind(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
    if (dynamic_cast<const RefusedError*>(&e)) return "RefusedError";
    if (dynamic_cast<const EmptySetError*>(&e)) return "EmptySetError";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    return "Error";
}

// CLI11 validator for exact rationals.
struct RationalValidator : CLI::Validator {
    RationalValidator() : CLI::Validator("RATIONAL") {
        func_ = [](std::string& s) -> std::string {
            try {
                parse_rational(s);
                return {};
            } catch (const std::exception& e) {
                return e.what();
            }
        };
    }
};

}  // namespace

unsigned long default_precision() {
    const char* env = std::getenv("THICKSUM_PRECISION");
    if (!env || !*env) return 64;
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0') throw ParseError(std::string("THICKSUM_PRECISION is not an integer: ") + env);
    return v;
}

int run(const RunConfig& c, std::ostream& out) {
    try {
        if (c.precision < 16) throw DomainError("precision must be at least 16 bits");
        if (c.horizon && *c.horizon <= 0) throw DomainError("horizon must be positive");
        if (c.subcommand == "tau") return cmd_tau(c, out);
        if (c.subcommand == "sum") return cmd_sum(c, out);
        if (c.subcommand == "lambda") return cmd_lambda(c, out);
        if (c.subcommand == "classify") return cmd_classify(c, out);
        if (c.subcommand == "certify") return cmd_certify(c, out);
        if (c.subcommand == "halfline") return cmd_halfline(c, out);
        if (c.subcommand == "phase-scan") return cmd_phase_scan(c, out);
        if (c.subcommand == "selftest") return cmd_selftest(c, out);
        throw DomainError("unknown subcommand \"" + c.subcommand + "\"");
    } catch (const std::exception& e) {
        emit(out, Json{{"error", {{"kind", error_kind(e)}, {"message", e.what()}}}});
        return 2;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    try {
        c.precision = default_precision();
    } catch (const std::exception& e) {
        emit(out, Json{{"error", {{"kind", error_kind(e)}, {"message", e.what()}}}});
        return 2;
    }
    CLI::App app{"Exact thickness, Minkowski sums and half-line certificates for g[F] + g[F]", "thicksum"};
    app.footer(kSchemas);
    app.require_subcommand(1);
    app.fallthrough();
    const RationalValidator rational;

    std::string format, horizon, gamma, M, sparse, A, a, eps, R, tau_s, from;
    app.add_option("--precision", c.precision, "Enclosure precision in bits (>= 16)");
    app.add_option("--format", format, "Output format: text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    auto* tau_cmd = app.add_subcommand("tau", "Thickness of a set");
    tau_cmd->add_option("set", c.inputs, "Set JSON file")->required();
    tau_cmd->add_option_function<std::string>(
               "--presentation", [&](const std::string& p) { c.brute = p == "brute"; },
               "canonical (default) or brute (maximum over all gap orders, <= 8 gaps)")
        ->check(CLI::IsMember({"canonical", "brute"}));

    auto* sum_cmd = app.add_subcommand("sum", "Exact Minkowski sum of two sets (one set: its self-sum)");
    sum_cmd->add_option("sets", c.inputs, "Set JSON files")->required()->expected(1, 2);

    auto* lambda_cmd = app.add_subcommand("lambda", "Relative variation Lambda(g, gamma, M) or its limit");
    lambda_cmd->add_option("function", c.inputs, "Function JSON file")->required();
    lambda_cmd->add_option("--gamma", gamma, "Window length (default 1)")->check(rational);
    lambda_cmd->add_option("--M", M, "Lower bound M; the limit M -> inf when omitted")->check(rational);

    auto* classify_cmd = app.add_subcommand("classify", "TRV / BRV_not_TRV / not_BRV / unknown");
    classify_cmd->add_option("function", c.inputs, "Function JSON file")->required();
    classify_cmd->add_option("--gamma", gamma, "Window length (default 1)")->check(rational);

    auto* certify_cmd = app.add_subcommand("certify", "Certify (A,a,tau)-thickness or a-sparsity of a fragmentation");
    certify_cmd->add_option("fragmentation", c.inputs, "Fragmentation JSON file")->required();
    certify_cmd->add_option_function<std::string>(
        "--thick", [&](const std::string& s) { c.thick = s; }, "A,a,tau");
    certify_cmd->add_option("--sparse", sparse, "Minimum distance a")->check(rational);
    certify_cmd->add_option("--skip", c.skip, "Initial fragments exempt from the thickness check");

    auto* half_cmd = app.add_subcommand("halfline", "Half-line certification or refutation for g[F] + g[F]");
    half_cmd->add_option("--frag", c.frag_path, "Fragmentation JSON file")->required();
    half_cmd->add_option("--fn", c.fn_path, "Function JSON file")->required();
    half_cmd->add_option("--mode", c.mode, "chain (default), bigtau, refute or exact")
        ->check(CLI::IsMember({"chain", "bigtau", "refute", "exact"}));
    half_cmd->add_option("--horizon", horizon, "Value up to which links / coverage are listed (default 1000)")
        ->check(rational);
    half_cmd->add_option("--A", A, "Diameter lower bound A")->check(rational);
    half_cmd->add_option("--a", a, "Distance bound a")->check(rational);
    half_cmd->add_option("--eps", eps, "Thickness slack: fragments must be (1 + eps)-thick (default 1)")->check(rational);
    half_cmd->add_option("--skip", c.skip, "Initial fragments exempt from the thickness certificate");
    half_cmd->add_option("--R", R, "bigtau: bound on Lambda(g, A)")->check(rational);
    half_cmd->add_option("--tau", tau_s, "bigtau: thickness of the fragments")->check(rational);
    half_cmd->add_option("--fold", c.fold, "refute: number of summands (default 2)");
    half_cmd->add_option("--witnesses", c.witnesses, "refute: largest witness index (default 20)");
    half_cmd->add_option("--from", from, "exact: left end of the coverage window (default 0)")->check(rational);

    auto* scan_cmd = app.add_subcommand("phase-scan", "Grid scan of e^{rx} on F(A, a)");
    scan_cmd->add_option("--A", A, "Fragment length A")->required()->check(rational);
    scan_cmd->add_option("--r-grid,--r", c.r_grid, "r values: \"1/2,1\" or \"lo:hi:step\"")->required();
    scan_cmd->add_option("--a-grid,--a", c.a_grid, "a values: \"1/2,1\" or \"lo:hi:step\"")->required();
    scan_cmd->add_option("--fragments", c.fragments, "Fragments K_0.. used per cell (default 40)");
    scan_cmd->add_option("--threads", c.threads, "Worker threads (default: hardware concurrency)");
    scan_cmd->add_flag("--no-runtime", c.no_runtime, "Omit the runtime_ms column");

    auto* self_cmd = app.add_subcommand("selftest", "Randomized property suite");
    self_cmd->add_option("--seed", c.seed, "Random seed (default 1)");
    self_cmd->add_option("--cases", c.cases, "Cases per property (default 50)");
    self_cmd->add_option("--only", c.only, "Check names or groups to run");
    self_cmd->add_flag("--inject-fault", c.inject_fault, "Check a deliberately false claim");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        c.subcommand = app.get_subcommands().front()->get_name();
        if (!format.empty())
            c.format = format == "text" ? OutputFormat::Text : format == "json" ? OutputFormat::Json : OutputFormat::Csv;
        if (!horizon.empty()) c.horizon = parse_rational(horizon);
        if (!gamma.empty()) c.gamma = parse_rational(gamma);
        if (!M.empty()) c.M = parse_rational(M);
        if (!sparse.empty()) c.sparse = parse_rational(sparse);
        if (!A.empty()) c.A = parse_rational(A);
        if (!a.empty()) c.a = parse_rational(a);
        if (!eps.empty()) c.eps = parse_rational(eps);
        if (!R.empty()) c.R = parse_rational(R);
        if (!tau_s.empty()) c.tau = parse_rational(tau_s);
        if (!from.empty()) c.from = parse_rational(from);
    } catch (const std::exception& e) {
        emit(out, Json{{"error", {{"kind", error_kind(e)}, {"message", e.what()}}}});
        return 2;
    }
    return run(c, out);
}

}  // namespace thicksum
