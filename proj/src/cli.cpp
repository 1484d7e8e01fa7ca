#include "fgcalc/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fgcalc/difference.hpp"
#include "fgcalc/expansion.hpp"
#include "fgcalc/functions.hpp"
#include "fgcalc/identities.hpp"
#include "fgcalc/inversion.hpp"
#include "fgcalc/kernel.hpp"
#include "fgcalc/parse.hpp"

namespace fgcalc {

using json = nlohmann::ordered_json;

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

json cjson(const Complex& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

template <class C>
json cjson(const C& z) {
    return cjson(to_complex(z));
}

json params_json(const std::map<std::string, Complex>& m) {
    json j = json::object();
    for (const auto& [k, v] : m) j[k] = format_complex(v);
    return j;
}

// Bibasic and theta need parameters; fill the ones the caller left out.
PairSpec pair_with_defaults(PairSpec spec) {
    if (spec.name == "bibasic") {
        spec.params.emplace("a", Complex(0.3, 0));
        spec.params.emplace("b", Complex(0.2, 0));
    }
    if (spec.name == "theta") spec.params.emplace("q", Complex(0.4, 0));
    return spec;
}

template <class Fn>
auto with_tier(int digits, Fn&& fn) {
    switch (digits) {
        case 16: return fn(Complex{});
        case 60: return fn(Wide{});
        case 200: return fn(ThetaWide{});
        default: return fn(Deep{});
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::Usage, "cannot open '" + path + "' for writing");
    f << text;
    if (!f) fail(ErrorKind::Usage, "failed writing '" + path + "'");
}

// JSON goes to the file, or to stdout in place of the text report for "-".
void emit(const RunConfig& cfg, const json& report, const std::string& text, std::ostream& out) {
    std::string dumped = report.dump(2) + "\n";
    if (cfg.json_path == "-") {
        out << dumped;
        return;
    }
    out << text;
    if (!cfg.json_path.empty()) write_file(cfg.json_path, dumped);
}

// ---- diff ------------------------------------------------------------------

template <class C>
json diff_report(const RunConfig& cfg) {
    auto pair = pair_with_defaults(parse_pair_spec(cfg.pair));
    auto sys = make_system<C>(pair, parse_sequence_spec(cfg.nodes), parse_sequence_spec(cfg.params));
    auto fspec = parse_function_spec(cfg.function);
    auto F = make_function<C>(fspec);
    DifferenceResult<C> r = cfg.method == "recursive" ? fg_difference_recursive(F, sys, cfg.order) : fg_difference(F, sys, cfg.order);
    json j;
    j["command"] = "diff";
    j["pair"] = format_pair_spec(pair);
    j["nodes"] = format_sequence_spec(parse_sequence_spec(cfg.nodes));
    j["params"] = format_sequence_spec(parse_sequence_spec(cfg.params));
    j["function"] = format_function_spec(fspec);
    j["order"] = cfg.order;
    j["digits"] = ScalarTraits<C>::digits;
    j["method"] = method_name(r.method);
    j["value"] = cjson(r.value);
    j["condition"] = r.condition_estimate;
    j["abs_sum"] = r.abs_sum;
    return j;
}

int run_diff(const RunConfig& cfg, std::ostream& out) {
    if (cfg.order < 0) fail(ErrorKind::Usage, "--order must be nonnegative");
    json j = with_tier(cfg.digits ? cfg.digits : 60, [&](auto tag) { return diff_report<decltype(tag)>(cfg); });
    emit(cfg, j, j.dump(2) + "\n", out);
    return 0;
}

// ---- invert ----------------------------------------------------------------

template <class C>
json invert_report(const RunConfig& cfg, double tol) {
    auto pair = pair_with_defaults(parse_pair_spec(cfg.pair));
    auto sys = make_system<C>(pair, parse_sequence_spec(cfg.nodes), parse_sequence_spec(cfg.params));
    auto tp = build_pair(sys, cfg.size);
    json j;
    j["command"] = "invert";
    j["pair"] = format_pair_spec(pair);
    j["nodes"] = format_sequence_spec(parse_sequence_spec(cfg.nodes));
    j["params"] = format_sequence_spec(parse_sequence_spec(cfg.params));
    j["size"] = cfg.size;
    j["digits"] = ScalarTraits<C>::digits;
    if (cfg.verify) {
        auto v = verify_pair(tp, tol);
        bool left = v.left_deviation >= v.right_deviation;
        j["max_deviation"] = v.max_deviation();
        j["worst_index"] = left ? json::array({v.left_worst_n, v.left_worst_k}) : json::array({v.right_worst_n, v.right_worst_k});
        j["left_deviation"] = v.left_deviation;
        j["right_deviation"] = v.right_deviation;
        j["tolerance"] = tol;
        j["passed"] = v.passed;
    } else {
        auto rows = [&](const LowerTriangular<C>& M) {
            json a = json::array();
            for (int n = 0; n < M.size(); ++n) {
                json row = json::array();
                for (int k = 0; k <= n; ++k) row.push_back(cjson(M.at(n, k)));
                a.push_back(row);
            }
            return a;
        };
        j["B"] = rows(tp.B);
        j["Binv"] = rows(tp.Binv);
    }
    return j;
}

int run_invert(const RunConfig& cfg, std::ostream& out) {
    if (cfg.size < 1) fail(ErrorKind::Usage, "--size must be at least 1");
    double tol = cfg.tolerance > 0 ? cfg.tolerance : 1e-9;
    // theta matrices reach 1e157 at size 14 and need the wider tier
    int digits = cfg.digits ? cfg.digits : (parse_pair_spec(cfg.pair).name == "theta" ? 200 : 60);
    json j = with_tier(digits, [&](auto tag) { return invert_report<decltype(tag)>(cfg, tol); });
    emit(cfg, j, j.dump(2) + "\n", out);
    return cfg.verify && !j["passed"].get<bool>() ? 1 : 0;
}

// ---- expand ----------------------------------------------------------------

struct ExpandOutcome {
    json report;
    std::string text, csv;
    bool agrees = false;
};

template <class C>
ExpandOutcome expand_report(const RunConfig& cfg, double tol) {
    auto pair = pair_with_defaults(parse_pair_spec(cfg.pair));
    auto sys = make_system<C>(pair, parse_sequence_spec(cfg.nodes), parse_sequence_spec(cfg.params));
    auto fspec = parse_function_spec(cfg.function);
    auto F = make_function<C>(fspec);
    C probe = from_complex<C>(parse_complex(cfg.probe));
    const int N = cfg.max_order;
    ExpansionSpec<C> spec{F, sys, N, {probe}};
    auto cs = expansion_coefficients(spec);
    auto lam = lambda_ratios(cs, N);
    auto ps = partial_sums(cs.G, sys, N, probe);
    C Fp = F(probe);
    auto diag = ismail_diagnostic(spec, probe, tol);

    ExpandOutcome o;
    json rows = json::array();
    std::ostringstream text, csv;
    csv << "n,re_G,im_G,abs_lambda,abs_error_at_probe,interpolation_residual\n";
    text << "expand " << format_pair_spec(pair) << " nodes " << format_sequence_spec(parse_sequence_spec(cfg.nodes)) << " params "
         << format_sequence_spec(parse_sequence_spec(cfg.params)) << " function " << format_function_spec(fspec) << " probe "
         << format_complex(to_complex(probe)) << " digits " << ScalarTraits<C>::digits << "\n";
    text << "   n           Re G           Im G    |lambda|  |S_n-F|@probe  interp\n";
    int shown = N;
    for (int n = 0; n <= N; ++n) {
        double t = mag(ps.terms[static_cast<size_t>(n)]);
        // coefficients past the roundoff floor of the partial sum end the report
        if (n > 0 && t != 0 && t < 1e-16 * mag(ps.S[static_cast<size_t>(n)])) {
            shown = n - 1;
            break;
        }
        C bn = sys.node(n);
        double interp = mag(C(F(bn) - partial_sums(cs.G, sys, n, bn).S.back()));
        double err = mag(C(ps.S[static_cast<size_t>(n)] - Fp));
        Complex g = to_complex(cs.G[static_cast<size_t>(n)]);
        bool has_lambda = n < N && lam[static_cast<size_t>(n)].defined;
        double l = has_lambda ? mag(lam[static_cast<size_t>(n)].value) : 0;
        json r{{"n", n}, {"G", cjson(g)}, {"abs_lambda", has_lambda ? json(l) : json(nullptr)}, {"abs_error_at_probe", err},
               {"interpolation_residual", interp}};
        rows.push_back(r);
        char buf[160];
        std::snprintf(buf, sizeof buf, "%4d %14.6e %14.6e %11s %14.3e %9.2e\n", n, g.real(), g.imag(), has_lambda ? sci(l).c_str() : "-",
                      err, interp);
        text << buf;
        char cbuf[200];
        std::snprintf(cbuf, sizeof cbuf, "%d,%.17g,%.17g,%s,%.17g,%.17g\n", n, g.real(), g.imag(),
                      has_lambda ? format_complex(Complex(l, 0)).c_str() : "", err, interp);
        csv << cbuf;
    }
    text << "verdict " << verdict_name(diag.verdict) << ", rate " << sci(diag.empirical_rate) << ", order used " << diag.order_used << "\n";
    text << "S(probe) " << format_complex(diag.partial_sum) << " F(probe) " << format_complex(diag.target) << " |S-F| "
         << sci(diag.reconstruction_error) << " tolerance " << sci(tol) << "\n";
    text << (diag.agrees ? "PASS " : "FAIL ") << diag.note << "\n";

    json j;
    j["command"] = "expand";
    j["pair"] = format_pair_spec(pair);
    j["nodes"] = format_sequence_spec(parse_sequence_spec(cfg.nodes));
    j["params"] = format_sequence_spec(parse_sequence_spec(cfg.params));
    j["function"] = format_function_spec(fspec);
    j["max_order"] = N;
    j["orders_reported"] = shown + 1;
    j["digits"] = ScalarTraits<C>::digits;
    j["probe"] = cjson(to_complex(probe));
    j["rows"] = rows;
    j["diagnostic"] = {{"verdict", verdict_name(diag.verdict)},
                       {"empirical_rate", diag.empirical_rate},
                       {"order_used", diag.order_used},
                       {"partial_sum", cjson(diag.partial_sum)},
                       {"target", cjson(diag.target)},
                       {"reconstruction_error", diag.reconstruction_error},
                       {"tolerance", tol},
                       {"nodes_have_finite_limit", diag.nodes_have_finite_limit},
                       {"agrees", diag.agrees},
                       {"note", diag.note}};
    o.report = j;
    o.text = text.str();
    o.csv = csv.str();
    o.agrees = diag.agrees;
    return o;
}

int run_expand(const RunConfig& cfg, std::ostream& out) {
    if (cfg.max_order < 1) fail(ErrorKind::Usage, "--max-order must be at least 1");
    double tol = cfg.tolerance > 0 ? cfg.tolerance : 1e-8;
    auto o = with_tier(cfg.digits ? cfg.digits : 320, [&](auto tag) { return expand_report<decltype(tag)>(cfg, tol); });
    emit(cfg, o.report, o.text, out);
    if (!cfg.csv_path.empty()) write_file(cfg.csv_path, o.csv);
    return o.agrees ? 0 : 1;
}

// ---- kernel-check ----------------------------------------------------------

template <class C>
json kernel_report(const std::vector<PairSpec>& pairs, const RunConfig& cfg, bool& all_passed) {
    json arr = json::array();
    for (const auto& spec : pairs) {
        auto pair = make_pair<C>(spec);
        double tol = cfg.tolerance > 0 ? cfg.tolerance : (spec.name == "theta" ? 1e-8 : 1e-12);
        auto k = kernel_check(pair, cfg.samples, cfg.seed, tol);
        auto a = check_antisymmetry(pair, std::min(cfg.samples, 200), cfg.seed, 1e-12);
        json worst = json::array();
        for (const auto& z : k.worst) worst.push_back(cjson(z));
        arr.push_back({{"pair", format_pair_spec(spec)},
                       {"samples", k.samples},
                       {"max_relative", k.max_relative},
                       {"max_absolute", k.max_absolute},
                       {"worst_point", worst},
                       {"tolerance", tol},
                       {"passed", k.passed},
                       {"g_antisymmetric", a.passed},
                       {"antisymmetry_residual", a.max_relative}});
        all_passed = all_passed && k.passed;
    }
    return arr;
}

int run_kernel(const RunConfig& cfg, std::ostream& out) {
    if (cfg.samples < 1) fail(ErrorKind::Usage, "--samples must be at least 1");
    std::vector<PairSpec> pairs;
    if (cfg.pair.empty() || cfg.pair == "all") {
        for (const auto& n : pair_names()) pairs.push_back(pair_with_defaults(PairSpec{n, {}}));
    } else {
        pairs.push_back(pair_with_defaults(parse_pair_spec(cfg.pair)));
    }
    bool ok = true;
    json j;
    j["command"] = "kernel-check";
    j["seed"] = cfg.seed;
    j["digits"] = cfg.digits ? cfg.digits : 60;
    j["pairs"] = with_tier(cfg.digits ? cfg.digits : 60, [&](auto tag) { return kernel_report<decltype(tag)>(pairs, cfg, ok); });
    j["passed"] = ok;
    emit(cfg, j, j.dump(2) + "\n", out);
    return ok ? 0 : 1;
}

// ---- corpus ----------------------------------------------------------------

struct CaseOutcome {
    VerifyReport verify;
    std::optional<FgReport> fg;
    std::optional<SweepReport> sweep;
    bool passed = false;
};

json check_json(const Check& c) {
    return {{"label", c.label}, {"lhs", cjson(c.lhs)}, {"rhs", cjson(c.rhs)}, {"rel_error", c.rel_error}, {"tolerance", c.tolerance},
            {"passed", c.passed}};
}

int run_list(std::ostream& out) {
    out << "cases:\n";
    for (const auto& c : corpus())
        out << "  " << c.id << "  [" << c.anchor << "]  " << c.title << (c.terminating ? "  (terminating)" : "") << "\n";
    out << "expansion table rows:\n";
    for (const auto& r : table_rows())
        out << "  " << r.row << "  " << r.name << "  " << (r.implemented ? "case " + r.case_id : std::string("stub, not implemented")) << "\n";
    return 0;
}

int run_corpus(const RunConfig& cfg, std::ostream& out) {
    if (cfg.list) return run_list(out);
    if (cfg.sweep < 0) fail(ErrorKind::Usage, "--sweep must be nonnegative");
    std::vector<const IdentityCase*> cases;
    if (cfg.case_id.empty()) {
        if (!cfg.overrides.empty()) fail(ErrorKind::Usage, "--set needs --case");
        for (const auto& c : corpus()) cases.push_back(&c);
    } else {
        cases.push_back(&find_case(cfg.case_id));
    }
    std::map<std::string, Complex> overrides;
    for (const auto& s : cfg.overrides)
        for (const auto& [k, v] : parse_kv(s, "--set")) overrides[k] = v;
    // Resolve every parameter set up front so domain errors surface before any work.
    std::vector<std::map<std::string, Complex>> params;
    for (const auto* c : cases) params.push_back(resolve_params(*c, overrides));

    std::vector<std::future<CaseOutcome>> jobs;
    for (size_t i = 0; i < cases.size(); ++i) {
        jobs.push_back(std::async(std::launch::async, [&, i] {
            const IdentityCase& c = *cases[i];
            CaseOutcome o;
            o.verify = verify(c, params[i], cfg.tolerance);
            o.passed = o.verify.passed;
            if (cfg.fg && c.fg) {
                o.fg = verify_fg_interpretation(c, params[i]);
                o.passed = o.passed && o.fg->passed;
            }
            if (cfg.sweep > 0) {
                o.sweep = sweep(c, cfg.seed, cfg.sweep);
                o.passed = o.passed && o.sweep->passed;
            }
            return o;
        }));
    }
    std::vector<CaseOutcome> results;
    for (auto& f : jobs) results.push_back(f.get());

    std::ostringstream text, csv;
    csv << "id,anchor,check,lhs_re,lhs_im,rhs_re,rhs_im,rel_error,tolerance,passed\n";
    json arr = json::array();
    bool all = true;
    for (size_t i = 0; i < cases.size(); ++i) {
        const auto& c = *cases[i];
        const auto& o = results[i];
        all = all && o.passed;
        const auto& v = o.verify;
        text << (o.passed ? "PASS  " : "FAIL  ") << c.id << "  [" << c.anchor << "]  worst " << sci(v.worst_rel_error) << "  ("
             << v.checks.size() << " checks)\n";
        for (const auto& ch : v.checks) {
            if (!ch.passed || !cfg.case_id.empty())
                text << "      " << (ch.passed ? "ok    " : "FAIL  ") << ch.label << "  rel " << sci(ch.rel_error) << " tol "
                     << sci(ch.tolerance) << "\n";
            char buf[512];
            std::snprintf(buf, sizeof buf, "%s,%s,\"%s\",%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", c.id.c_str(), c.anchor.c_str(),
                          ch.label.c_str(), ch.lhs.real(), ch.lhs.imag(), ch.rhs.real(), ch.rhs.imag(), ch.rel_error, ch.tolerance,
                          ch.passed ? 1 : 0);
            csv << buf;
        }
        if (v.divergent) text << "      divergent: " << v.message << "\n";
        else if (!v.message.empty()) text << "      note: " << v.message << "\n";
        json cj;
        cj["id"] = c.id;
        cj["anchor"] = c.anchor;
        cj["title"] = c.title;
        cj["terminating"] = c.terminating;
        cj["params"] = params_json(v.params);
        json checks = json::array();
        for (const auto& ch : v.checks) checks.push_back(check_json(ch));
        cj["checks"] = checks;
        cj["worst_rel_error"] = v.worst_rel_error;
        cj["divergent"] = v.divergent;
        cj["message"] = v.message;
        if (o.fg) {
            const auto& f = *o.fg;
            text << "      fg " << (f.passed ? "ok  " : "FAIL") << "  coefficients " << sci(f.max_coefficient_error) << " (n <= "
                 << f.coefficient_orders << ")  value at probe " << sci(f.value_error) << "  " << f.note << "\n";
            cj["fg"] = {{"row", f.row},
                        {"max_order", f.max_order},
                        {"coefficient_orders", f.coefficient_orders},
                        {"max_coefficient_error", f.max_coefficient_error},
                        {"coefficient_tolerance", f.coefficient_tolerance},
                        {"probe", cjson(f.probe)},
                        {"expansion_value", cjson(f.expansion_value)},
                        {"direct_value", cjson(f.direct_value)},
                        {"value_error", f.value_error},
                        {"value_tolerance", f.value_tolerance},
                        {"passed", f.passed},
                        {"note", f.note}};
        }
        if (o.sweep) {
            const auto& s = *o.sweep;
            text << "      sweep " << (s.passed ? "ok  " : "FAIL") << "  " << s.trials << " trials, seed " << s.seed << ", "
                 << s.failures << " failures, worst " << sci(s.worst_rel_error) << "\n";
            cj["sweep"] = {{"seed", s.seed},
                           {"trials", s.trials},
                           {"rejected_draws", s.rejected_draws},
                           {"failures", s.failures},
                           {"worst_rel_error", s.worst_rel_error},
                           {"worst_params", params_json(s.worst_params)},
                           {"passed", s.passed}};
        }
        cj["passed"] = o.passed;
        arr.push_back(cj);
    }
    size_t npass = static_cast<size_t>(std::count_if(results.begin(), results.end(), [](const CaseOutcome& o) { return o.passed; }));
    text << npass << "/" << cases.size() << " cases passed\n";
    json j;
    j["command"] = "corpus";
    j["seed"] = cfg.seed;
    j["sweep_trials"] = cfg.sweep;
    j["cases"] = arr;
    j["passed"] = all;
    emit(cfg, j, text.str(), out);
    if (!cfg.csv_path.empty()) write_file(cfg.csv_path, csv.str());
    return all ? 0 : 1;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Usage:
        case ErrorKind::MissingParameter: return 2;
        default: return 3;
    }
}

RunConfig parse_args(const std::vector<std::string>& argv, std::string* help) {
    RunConfig cfg;
    CLI::App app{"fg: (f,g)-difference, inversion and expansion calculator", "fg"};
    app.require_subcommand(1);
    auto digits = [&](CLI::App* sub) {
        sub->add_option("--digits", cfg.digits, "working precision: 16, 60, 200 or 320 digits")->check(CLI::IsMember({16, 60, 200, 320}));
    };
    auto system = [&](CLI::App* sub, bool pair_required) {
        auto* p = sub->add_option("--pair", cfg.pair, "kernel pair, e.g. onexy-diff or bibasic:a=0.3,b=0.2");
        if (pair_required) p->required();
        sub->add_option("--nodes", cfg.nodes, "node sequence b_i")->capture_default_str();
        sub->add_option("--params", cfg.params, "parameter sequence x_i")->capture_default_str();
    };

    auto* diff = app.add_subcommand("diff", "n-th (f,g)-difference of a named function");
    system(diff, true);
    diff->add_option("--function", cfg.function, "named function, e.g. inv1mcx:c=0.3")->capture_default_str();
    diff->add_option("--order", cfg.order, "difference order")->capture_default_str();
    diff->add_option("--method", cfg.method, "direct or recursive")->check(CLI::IsMember({"direct", "recursive"}))->capture_default_str();
    diff->add_option("--json", cfg.json_path, "write the JSON report here");
    digits(diff);

    auto* inv = app.add_subcommand("invert", "build the (f,g)-inversion matrix pair");
    system(inv, true);
    inv->add_option("--size", cfg.size, "matrix size")->capture_default_str();
    inv->add_flag("--verify", cfg.verify, "report max |Binv B - I| and |B Binv - I|");
    inv->add_option("--tolerance", cfg.tolerance, "verification tolerance (default 1e-9)");
    inv->add_option("--json", cfg.json_path, "write the JSON report here");
    digits(inv);

    auto* exp = app.add_subcommand("expand", "(f,g)-expansion coefficients and reconstruction diagnostic");
    system(exp, true);
    exp->add_option("--function", cfg.function, "named function")->capture_default_str();
    exp->add_option("--max-order", cfg.max_order, "highest coefficient order")->capture_default_str();
    exp->add_option("--probe", cfg.probe, "evaluation point")->capture_default_str();
    exp->add_option("--tolerance", cfg.tolerance, "reconstruction tolerance (default 1e-8)");
    exp->add_option("--json", cfg.json_path, "write the JSON report here ('-' for stdout)");
    exp->add_option("--csv", cfg.csv_path, "write the coefficient table here");
    digits(exp);

    auto* cor = app.add_subcommand("corpus", "verify the identity corpus");
    cor->add_option("--case", cfg.case_id, "run one case");
    cor->add_option("--set", cfg.overrides, "parameter overrides k=v[,k=v]; needs --case");
    cor->add_option("--sweep", cfg.sweep, "seeded random trials per case");
    cor->add_option("--seed", cfg.seed, "sweep seed")->capture_default_str();
    cor->add_option("--tolerance", cfg.tolerance, "override every check's tolerance");
    cor->add_flag("--fg", cfg.fg, "also check the (f,g)-expansion interpretation");
    cor->add_flag("--list", cfg.list, "list cases and expansion table rows");
    cor->add_option("--json", cfg.json_path, "write the JSON report here ('-' for stdout)");
    cor->add_option("--csv", cfg.csv_path, "write one CSV row per check here");

    auto* ker = app.add_subcommand("kernel-check", "sample the three-term kernel identity");
    ker->add_option("--pair", cfg.pair, "pair name or 'all'")->capture_default_str();
    ker->add_option("--samples", cfg.samples, "random quadruples")->capture_default_str();
    ker->add_option("--seed", cfg.seed, "sampler seed")->capture_default_str();
    ker->add_option("--tolerance", cfg.tolerance, "relative tolerance (default 1e-12, theta 1e-8)");
    ker->add_option("--json", cfg.json_path, "write the JSON report here");
    digits(ker);

    // CLI11 consumes the vector from the back.
    std::vector<std::string> args(argv.rbegin(), argv.rend());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        if (help) *help = app.help();
        return RunConfig{};
    } catch (const CLI::ParseError& e) {
        fail(ErrorKind::Usage, e.what());
    }
    for (auto* sub : {diff, inv, exp, cor, ker})
        if (sub->parsed()) cfg.subcommand = sub->get_name();
    return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
    if (cfg.subcommand == "diff") return run_diff(cfg, out);
    if (cfg.subcommand == "invert") return run_invert(cfg, out);
    if (cfg.subcommand == "expand") return run_expand(cfg, out);
    if (cfg.subcommand == "corpus") return run_corpus(cfg, out);
    if (cfg.subcommand == "kernel-check") return run_kernel(cfg, out);
    fail(ErrorKind::Usage, "unknown subcommand '" + cfg.subcommand + "'");
}

int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    try {
        std::string help;
        RunConfig cfg = parse_args(argv, &help);
        if (cfg.subcommand.empty()) {
            out << help;
            return 0;
        }
        return run(cfg, out, err);
    } catch (const FgError& e) {
        err << "fg: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "fg: internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace fgcalc
