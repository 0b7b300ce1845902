#include "ltail/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "ltail/errors.hpp"
#include "ltail/experiments.hpp"
#include "ltail/verify.hpp"

namespace ltail {

namespace {

struct Options {
    std::string curve = "11a1";
    int sign = 0;
    std::uint64_t residue = 0;
    std::uint64_t divisor = 1;
    std::optional<double> X;
    std::vector<double> alpha;
    std::string preset = "desk";
    std::optional<double> s_param, trunc_exp, r_const, V, length_exp;
    std::optional<int> a1_trunc, trunc_k, omega_bound;
    std::uint64_t seed = 1;
    std::string out = "-";
    bool h_uses_d = false;
    std::string suite = "all";
    std::vector<double> theta;
};

void add_common(CLI::App* app, Options& o) {
    app->add_option("--curve", o.curve, "curve label from the registry");
    app->add_option("--sign", o.sign, "twist sign +1 or -1; 0 for both")->check(CLI::IsMember({-1, 0, 1}));
    app->add_option("--residue", o.residue, "residue class a mod N0; 0 for every admissible class");
    app->add_option("--divisor", o.divisor, "v, required divisor of |d|");
    app->add_option("-X", o.X, "family cap |d| <= X");
    app->add_option("--alpha", o.alpha, "tail exponent(s), comma separated")->delimiter(',');
    app->add_option("--preset", o.preset, "constant preset")->check(CLI::IsMember({"desk", "paper"}));
    app->add_option("--s-param", o.s_param, "barrier width s");
    app->add_option("--trunc-exp", o.trunc_exp, "degree exponent of A_j");
    app->add_option("--a1-trunc", o.a1_trunc, "degree of A_1");
    app->add_option("--trunc-k", o.trunc_k, "fixed degree for every A_j");
    app->add_option("--omega-bound", o.omega_bound, "fixed Omega bound per interval");
    app->add_option("--length-exp", o.length_exp, "twist length exponent");
    app->add_option("--r-const", o.r_const, "constant in the definition of R");
    app->add_option("--V", o.V, "tail level V (default alpha loglog X)");
    app->add_option("--seed", o.seed, "RNG seed");
    app->add_option("--out", o.out, "CSV destination, - for stdout");
    app->add_flag("--h-uses-d", o.h_uses_d, "threshold of H uses loglog|d| instead of loglog X");
}

EffectiveConstants constants(const Options& o) {
    EffectiveConstants k = o.preset == "paper" ? EffectiveConstants::paper() : EffectiveConstants::desk();
    if (o.s_param) k.s_param = *o.s_param;
    if (o.trunc_exp) k.trunc_exp = *o.trunc_exp;
    if (o.r_const) k.r_const = *o.r_const;
    if (o.length_exp) k.length_exp = *o.length_exp;
    if (o.a1_trunc) k.a1_trunc = *o.a1_trunc;
    if (o.trunc_k) k.trunc_k = *o.trunc_k;
    if (o.omega_bound) k.omega_bound = *o.omega_bound;
    if (o.V) k.V = *o.V;
    return k;
}

double family_X(const Options& o) { return o.X.value_or(1e6); }

FamilyKey key_of(const Options& o) { return FamilyKey{o.sign, o.residue, o.divisor, family_X(o)}; }

// single writer for every report
class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) fail(Errc::IoError, "cannot open " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<double> alphas(const Options& o, std::vector<double> dflt) { return o.alpha.empty() ? dflt : o.alpha; }

int cmd_sieve(const Options& o) {
    auto c = registry_curve(o.curve);
    auto bound = static_cast<std::uint64_t>(o.X.value_or(10000));
    auto t = HeckeTable::build(c, bound);
    Output out(o.out);
    CsvWriter w(out.stream(), {"p", "A_p", "a_p", "reduction"});
    std::string k = fmt::format("curve={} bound={}", c.label, bound);
    for (auto p : t.primes())
        w.row({fmt::format("{}", p), fmt::format("{}", t.trace(p)), CsvWriter::num(t.ap(p)),
               reduction_name(c.reduction_at(p))},
              k);
    return 0;
}

int cmd_lvalues(const Options& o) {
    auto c = registry_curve(o.curve);
    auto w = prepare(c, key_of(o));
    std::cerr << fmt::format("{} twists, cache {}\n", w.family.size(), cache_path(c.label, w.family.key));
    Output out(o.out);
    CsvWriter csv(out.stream(), {"d", "value", "n_max", "tail_bound"});
    std::string k = fmt::format("curve={} family={} rel_tol={:g}", c.label, w.family.key.describe(), w.cache.rel_tol());
    for (auto d : w.family.discriminants) {
        auto& e = w.cache.at(d);
        csv.row({fmt::format("{}", d), CsvWriter::num(e.value), CsvWriter::num(e.n_max), CsvWriter::num(e.tail_bound)},
                k);
    }
    return 0;
}

int cmd_tails(const Options& o) {
    auto c = registry_curve(o.curve);
    auto w = prepare(c, key_of(o));
    auto k = constants(o);
    std::vector<TailReport> rows;
    std::string desc;
    for (double a : alphas(o, {0.1, 0.2, 0.3, 0.4})) {
        rows.push_back(tail_report(w, a, k, o.h_uses_d));
        desc = fmt::format("curve={} h_uses_d={} {}", c.label, o.h_uses_d, k.describe(a));
    }
    Output out(o.out);
    write_tail_reports(out.stream(), rows, desc);
    return 0;
}

int cmd_barrier(const Options& o) {
    auto c = registry_curve(o.curve);
    auto k = constants(o);
    double a = alphas(o, {0.3}).front();
    // fail on a degenerate schedule before paying for the family
    build_schedule(family_X(o), a, k);
    auto w = prepare(c, key_of(o));
    auto run = barrier_run(w, a, k, o.h_uses_d);
    std::cerr << fmt::format("R={} |H|={} of {}\n", run.schedule.R, run.report.count_H, run.report.family_size);
    Output out(o.out);
    write_decomposition(out.stream(), run.report,
                        fmt::format("curve={} family={} alpha={:g} V={:g} {}", c.label, w.family.key.describe(), a,
                                    run.schedule.V, k.describe(a)));
    return 0;
}

int cmd_moments(const Options& o) {
    auto c = registry_curve(o.curve);
    auto k = constants(o);
    double a = alphas(o, {0.3}).front();
    auto w = prepare(c, key_of(o));
    auto run = barrier_run(w, a, k, o.h_uses_d);
    const auto& s = run.schedule;
    auto rows = walk_moment_rows(s, run.traces, 3);

    for (auto& i : twisted_mean_instances(w, s, 20, o.seed))
        rows.push_back({"twisted_mean", fmt::format("r={} terms={} max_n={}", i.r, i.Q.size(), i.Q.max_index()), i.lhs,
                        i.rhs, i.lhs / i.rhs});
    auto cp = cancellation_pair(w, s);
    rows.push_back({"cancellation_pair", fmt::format("p={} q={}", cp.p, cp.q), cp.square_mean, cp.diagonal_abs,
                    cp.square_mean / cp.diagonal_abs});
    for (int r = 1; r <= s.R; ++r) {
        auto me = mollification_effect(w, s, r);
        rows.push_back({"var_log_LM", fmt::format("r={} used={}", r, me.used), me.var_log_LM, me.var_log_L,
                        me.var_log_LM / me.var_log_L});
        rows.push_back({"corr_S_negLogM", fmt::format("r={}", r), me.corr_S_logM, 1.0, me.corr_S_logM});
    }
    for (int r = 1; r < s.R; ++r) {
        if (!(s.n[r] > 0)) continue;  // X_r < e: no Gaussian shape
        DirichletPoly one;
        one.coeffs[1] = 1;
        for (double u = -3; u <= 2; u += 1) {
            auto cm = conditional_moment_check(s, w.family, run.traces, one, r, u);
            rows.push_back({"conditional_moment", fmt::format("r={} w={:g} bucket={}", r, u, cm.in_bucket), cm.lhs,
                            cm.rhs_shape, cm.rhs_shape > 0 ? cm.lhs / cm.rhs_shape : 0});
        }
    }
    auto fit = leading_term_fit(c, w.family, w.cache, {1, 9, 25, 49}, SmoothingWeight::sharp());
    for (std::size_t i = 0; i < fit.n.size(); ++i)
        rows.push_back({"first_twisted_moment", fmt::format("n={}", fit.n[i]), fit.S[i], fit.S[i] - fit.residuals[i] * fit.c,
                        fit.residuals[i]});
    auto b = beta_sweep(w.hecke, 11, 1000);
    rows.push_back({"beta_ratio", fmt::format("p in [11,1000] argmax={}", b.argmax), b.max_scaled_ratio, 10,
                    b.max_scaled_ratio / 10});
    Output out(o.out);
    write_moments(out.stream(), rows,
                  fmt::format("curve={} family={} alpha={:g} R={} {}", c.label, w.family.key.describe(), a, s.R,
                              k.describe(a)));
    return 0;
}

int cmd_quadform(const Options& o) {
    VerifyOptions v;
    v.seed = o.seed;
    if (o.theta.size() == 4) v.theta = std::array<double, 4>{o.theta[0], o.theta[1], o.theta[2], o.theta[3]};
    auto res = run_verify("quadform", v, std::cerr);
    Output out(o.out);
    CsvWriter w(out.stream(), {"check", "value", "bound", "margin", "pass"});
    bool ok = true;
    for (auto& r : res) {
        w.row({r.name, CsvWriter::num(r.value), CsvWriter::num(r.bound), CsvWriter::num(r.margin), r.pass ? "1" : "0"},
              fmt::format("seed={}", o.seed));
        ok = ok && r.pass;
    }
    return ok ? 0 : 1;
}

int cmd_verify_suite(const Options& o) {
    VerifyOptions v;
    v.curve = o.curve;
    v.X = family_X(o);
    v.alpha = alphas(o, {0.3}).front();
    v.constants = constants(o);
    v.seed = o.seed;
    if (o.theta.size() == 4) v.theta = std::array<double, 4>{o.theta[0], o.theta[1], o.theta[2], o.theta[3]};
    return cmd_verify(o.suite, v, std::cout);
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Upper-tail experiments for central values of quadratic twists"};
    app.require_subcommand(1);
    Options o;
    int (*run)(const Options&) = nullptr;
    auto sub = [&](const char* name, const char* help, int (*fn)(const Options&)) {
        auto* s = app.add_subcommand(name, help);
        add_common(s, o);
        s->callback([&run, fn] { run = fn; });
        return s;
    };
    sub("sieve", "a(p) table up to -X", cmd_sieve);
    sub("lvalues", "compute or load cached central values", cmd_lvalues);
    sub("tails", "tail counts against the Gaussian prediction", cmd_tails);
    sub("barrier", "barrier decomposition of the tail event", cmd_barrier);
    sub("moments", "walk, twisted and beta moment checks", cmd_moments);
    auto* q = sub("quadform", "quadratic form dominance suite", cmd_quadform);
    q->add_option("--theta", o.theta, "inject theta1,theta2,theta3,theta4")->delimiter(',')->expected(4);
    auto* v = sub("verify", "run property suites", cmd_verify_suite);
    v->add_option("suite", o.suite, "ecarith|family|dpoly|moments|quadform|all")
        ->check(CLI::IsMember({"ecarith", "family", "dpoly", "moments", "quadform", "all"}));
    v->add_option("--theta", o.theta, "inject theta into the quadform suite")->delimiter(',')->expected(4);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        return run(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace ltail
