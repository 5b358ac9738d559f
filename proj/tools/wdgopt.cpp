// wdgopt: verify weak discrete gradients, run schemes, reproduce the benchmark figures, print rate tables.

#include "wdgopt/bench.hpp"
#include "wdgopt/rates.hpp"
#include "wdgopt/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("WDG_OPT_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw UsageError("WDG_OPT_SEED is not an unsigned integer: " + std::string(env));
    }
    return wdg::kDefaultSeed;
}

wdg::Vec parse_point(const std::string& text, int dim) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            vals.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("bad coordinate '" + item + "'");
        }
    }
    if (static_cast<int>(vals.size()) != dim)
        throw UsageError("point '" + text + "' needs " + std::to_string(dim) + " coordinates");
    return Eigen::Map<wdg::Vec>(vals.data(), dim);
}

wdg::Vec default_start(const wdg::Objective& f) {
    if (f.name == "quartic2d") return wdg::Vec{{2.0, 4.0}};
    if (f.name == "quadratic2d") return wdg::Vec{{2.0, 3.0}};
    if (f.name == "plsine") return wdg::Vec::Constant(1, 3.0);
    return wdg::Vec::Ones(f.dim);
}

// writes to --out when given, stdout otherwise
struct Sink {
    std::ofstream file;
    std::ostream* out = &std::cout;
    explicit Sink(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw std::runtime_error("cannot write " + path);
        out = &file;
    }
};

struct Common {
    std::string problem;
    std::string wdg = "ee";
    std::optional<std::uint64_t> seed;
    std::string out;
    bool csv = false;
    bool json = false;
};

struct VerifyOpts {
    long samples = 100000;
    double tol = 1e-8;
    std::string mode;
};

int cmd_verify(const Common& c, const VerifyOpts& o) {
    const auto f = wdg::problem_by_key(c.problem);
    const auto kind = wdg::parse_wdg_kind(c.wdg);
    const auto seed = resolve_seed(c.seed);
    std::string mode = o.mode;
    if (mode.empty()) mode = f.convex ? "wdg" : "pl";

    wdg::VerificationReport rep;
    nlohmann::json params;
    if (mode == "wdg") {
        const auto p = wdg::wdg_params(kind, f);
        params = wdg::to_json(wdg::Params{p});
        rep = wdg::check_wdg_inequality(f, kind, p, o.samples, seed, o.tol);
    } else if (mode == "chain") {
        rep = wdg::check_strict_chain_rule(f, kind, o.samples, seed, o.tol);
    } else if (mode == "pl") {
        const auto p = wdg::pl_wdg_params(kind, f.L(), f.dim);
        params = wdg::to_json(wdg::Params{p});
        rep = wdg::check_pl_conditions(f, kind, p, o.samples, seed, o.tol);
    } else {
        throw UsageError("--mode must be wdg, chain or pl");
    }

    Sink sink(c.out);
    if (c.json) {
        auto j = wdg::to_json(rep);
        j["problem"] = c.problem;
        j["wdg"] = kind.key();
        j["mode"] = mode;
        j["seed"] = seed;
        if (!params.is_null()) j["params"] = params;
        *sink.out << j.dump(2) << '\n';
    } else {
        *sink.out << (rep.passed ? "PASS" : "FAIL") << ' ' << mode << ' ' << c.problem << ' ' << kind.key()
                  << " samples=" << rep.samples << " max_violation=" << wdg::fmt17(rep.max_violation)
                  << " tol=" << wdg::fmt17(rep.tol) << " seed=" << seed << '\n';
    }
    return rep.passed ? kPass : kFail;
}

struct RunOpts {
    std::string scheme = "gradient-flow";
    std::string h = "optimal";
    int iters = 100;
    std::string x0, v0;
    std::string z = "theorem";
    std::string theorem;
    double imp_tol = 1e-10;
    int imp_maxiter = 200;
};

int cmd_run(const Common& c, const RunOpts& o) {
    const auto f = wdg::problem_by_key(c.problem);
    const auto kind = wdg::parse_wdg_kind(c.wdg);
    wdg::SchemeConfig cfg;
    cfg.scheme = wdg::parse_scheme(o.scheme);
    cfg.iterations = o.iters;
    cfg.z_strategy = wdg::parse_z_strategy(o.z);
    cfg.solver.tol = o.imp_tol;
    cfg.solver.max_iter = o.imp_maxiter;
    cfg.x0 = o.x0.empty() ? default_start(f) : parse_point(o.x0, f.dim);
    if (!o.v0.empty()) cfg.v0 = parse_point(o.v0, f.dim);
    if (o.h != "optimal") {
        try {
            std::size_t used = 0;
            cfg.h = std::stod(o.h, &used);
            if (used != o.h.size()) throw std::invalid_argument(o.h);
        } catch (const std::exception&) {
            throw UsageError("--h must be a number or 'optimal'");
        }
    }

    const auto tr = wdg::run_scheme(f, kind, cfg);
    std::optional<wdg::RateCertificate> cert;
    std::optional<wdg::LyapunovSeries> lyap;
    std::optional<wdg::MonotonicityReport> mono;
    const bool baseline = tr.scheme == wdg::Scheme::NagC || tr.scheme == wdg::Scheme::NagSc;
    if (!baseline && f.optimum) {
        const auto t = o.theorem.empty() ? wdg::default_theorem(tr, f) : wdg::parse_theorem(o.theorem);
        cert = wdg::certify_trace(tr, t, f);
        lyap = wdg::lyapunov_series(tr, t, f);
        mono = wdg::check_lyapunov_monotone(*lyap);
    }

    Sink sink(c.out);
    if (c.json) {
        auto j = wdg::trace_summary(tr);
        j["problem"] = c.problem;
        if (cert) j["certificate"] = wdg::to_json(*cert);
        if (mono) j["lyapunov"] = wdg::to_json(*mono);
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < tr.records.size(); ++i) {
            const auto& r = tr.records[i];
            rows.push_back({{"k", r.k},
                            {"f_gap", r.f_gap},
                            {"x", std::vector<double>(r.x.data(), r.x.data() + r.x.size())},
                            {"inner_iters", r.inner_iters},
                            {"residual", r.residual}});
        }
        j["records"] = rows;
        *sink.out << j.dump(2) << '\n';
    } else {
        wdg::write_trace_csv(*sink.out, tr, cert ? &*cert : nullptr, lyap ? &*lyap : nullptr);
    }
    if (tr.aborted) {
        std::cerr << "run aborted: " << tr.abort_reason << '\n';
        return kFail;
    }
    if (cert && !cert->passed()) {
        std::cerr << "certificate " << wdg::theorem_key(cert->theorem) << " violated at k=" << *cert->first_violation
                  << '\n';
        return kFail;
    }
    if (mono && !mono->passed) {
        std::cerr << "Lyapunov sequence increased at k=" << *mono->first_violation << '\n';
        return kFail;
    }
    return kPass;
}

int cmd_bench(const std::string& which, const std::string& out, int iters) {
    const auto summary = wdg::bench_appendix_f(which, out, iters);
    for (const auto& r : summary.runs) {
        std::cout << r.method << " h=" << r.h_label << " (" << wdg::fmt17(r.h) << ") final_f_gap="
                  << wdg::fmt17(r.final_f_gap) << ' '
                  << (r.in_hypothesis ? (r.certified ? "certified" : "CERTIFICATE FAILED") : "n/a");
        if (!r.note.empty()) std::cout << " -- " << r.note;
        std::cout << '\n';
    }
    return summary.passed ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weak discrete gradient optimisation toolkit"};
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub, bool formats) {
        sub->add_option("--problem", common.problem, "quartic2d | quadratic2d | plsine | composite2d | quad:<file>")
            ->required();
        sub->add_option("--wdg", common.wdg, "ee | ie | mid | avf | gonzalez | itohabe | sum:a+b");
        sub->add_option("--seed", common.seed, "RNG seed (default: $WDG_OPT_SEED, else 42)");
        sub->add_option("--out", common.out, "output file (default: stdout)");
        if (formats) {
            auto* csv = sub->add_flag("--csv", common.csv, "CSV output");
            auto* json = sub->add_flag("--json", common.json, "JSON output");
            csv->excludes(json);
        } else {
            sub->add_flag("--json", common.json, "JSON output");
        }
    };

    VerifyOpts vo;
    auto* verify = app.add_subcommand("verify", "sample a weak-DG, chain-rule or PL inequality");
    add_common(verify, false);
    verify->add_option("--samples", vo.samples, "number of sampled triples")->check(CLI::PositiveNumber);
    verify->add_option("--tol", vo.tol, "relative slack")->check(CLI::PositiveNumber);
    verify->add_option("--mode", vo.mode, "wdg | chain | pl (default: wdg for convex problems, pl otherwise)");

    RunOpts ro;
    auto* run = app.add_subcommand("run", "run a scheme and certify its rate");
    add_common(run, true);
    run->add_option("--scheme", ro.scheme, "gradient-flow | accel-convex | accel-sc | prox | nag-c | nag-sc");
    run->add_option("--h", ro.h, "step size or 'optimal'");
    run->add_option("--iters", ro.iters, "iterations K")->check(CLI::PositiveNumber);
    run->add_option("--x0", ro.x0, "initial point, comma separated");
    run->add_option("--v0", ro.v0, "initial auxiliary point (default x0)");
    run->add_option("--z-strategy", ro.z, "theorem | prev | next");
    run->add_option("--theorem", ro.theorem, "gf-convex | gf-sc | gf-sc-plain | accel-convex | accel-sc | pl");
    run->add_option("--imp-tol", ro.imp_tol, "implicit solve residual tolerance")->check(CLI::PositiveNumber);
    run->add_option("--imp-maxiter", ro.imp_maxiter, "implicit solve iteration cap")->check(CLI::PositiveNumber);

    std::string which, bench_out;
    int bench_iters = 0;
    auto* bench = app.add_subcommand("bench", "reproduce the convex / strongly convex comparison runs");
    bench->add_option("--which", which, "convex | sc")->required()->check(CLI::IsMember({"convex", "sc"}));
    bench->add_option("--out", bench_out, "output directory")->required();
    bench->add_option("--iters", bench_iters, "iterations (default 10000 convex, 2000 sc)");

    double L = 1.0, mu = 0.0, mu2 = 0.0;
    int d = 2;
    auto* rates = app.add_subcommand("rates", "tabulate optimal-step contraction factors");
    rates->add_option("--L", L, "smoothness constant")->required()->check(CLI::PositiveNumber);
    rates->add_option("--mu", mu, "strong convexity constant")->required()->check(CLI::NonNegativeNumber);
    rates->add_option("--d", d, "dimension")->check(CLI::PositiveNumber);
    rates->add_option("--mu2", mu2, "strong convexity of the implicit part (proximal row)")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*verify) return cmd_verify(common, vo);
        if (*run) return cmd_run(common, ro);
        if (*bench) return cmd_bench(which, bench_out, bench_iters);
        if (*rates) {
            std::cout << wdg::format_rates_table(wdg::rates_table(L, mu, d, mu2), L, mu, d);
            return kPass;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFail;
    }
    return kUsage;
}
