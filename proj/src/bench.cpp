#include "wdgopt/bench.hpp"

#include "wdgopt/report.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <stdexcept>

namespace wdg {

namespace {

struct Job {
    std::string method;
    std::string h_label;
    std::string tag;
    double h;
    Scheme scheme;
    ZStrategy z = ZStrategy::Theorem;
};

BenchRun execute(const Job& job, const Objective& f, const Vec& x0, int iterations,
                 const std::filesystem::path& dir) {
    SchemeConfig cfg;
    cfg.scheme = job.scheme;
    cfg.h = job.h;
    cfg.iterations = iterations;
    cfg.x0 = x0;
    cfg.z_strategy = job.z;
    const Trace tr = run_scheme(f, Dg::ExplicitEuler, cfg);

    BenchRun run;
    run.method = job.method;
    run.h_label = job.h_label;
    run.h = job.h;
    run.csv = job.method + "_" + job.tag + ".csv";
    run.final_f_gap = tr.records.back().f_gap;
    {
        std::ofstream out(dir / run.csv);
        if (!out) throw std::runtime_error("cannot write " + (dir / run.csv).string());
        write_trajectory_csv(out, tr);
    }

    if (job.scheme == Scheme::NagC || job.scheme == Scheme::NagSc) {
        run.note = "baseline, no certificate";
        return run;
    }
    const Theorem t = default_theorem(tr, f);
    run.theorem = t;
    const double limit = step_limit(t, tr.params, job.z);
    run.in_hypothesis = job.h <= limit * (1.0 + 1e-12);
    if (!run.in_hypothesis) {
        run.note = "step exceeds the theorem's limit " + fmt17(limit) + "; not certified";
        return run;
    }
    const auto cert = certify_trace(tr, t, f);
    const auto mono = check_lyapunov_monotone(lyapunov_series(tr, t, f));
    run.certified = cert.passed() && mono.passed;
    if (!cert.passed()) run.note = "bound violated at k=" + std::to_string(*cert.first_violation);
    else if (!mono.passed) run.note = "Lyapunov increase at k=" + std::to_string(*mono.first_violation);
    return run;
}

}  // namespace

BenchSummary bench_appendix_f(const std::string& which, const std::filesystem::path& out_dir, int iterations) {
    std::vector<Job> jobs;
    Objective f;
    Vec x0;
    if (which == "convex") {
        f = quartic_2d();
        x0 = Vec{{2.0, 4.0}};
        if (iterations <= 0) iterations = 10000;
        const double s = 1.0 / std::sqrt(f.L());
        for (const auto& [c, tag] : {std::pair{1.0, "h1.0"}, {0.7, "h0.7"}, {0.4, "h0.4"}}) {
            const std::string label = fmt17(c) + "/sqrt(L)";
            jobs.push_back({"wDG-c", label, tag, c * s, Scheme::AccelConvex});
            jobs.push_back({"NAG-c", label, tag, c * s, Scheme::NagC});
        }
    } else if (which == "sc") {
        f = quadratic_2d();
        x0 = Vec{{2.0, 3.0}};
        if (iterations <= 0) iterations = 2000;
        const double L = f.L(), mu = f.strong_convexity;
        const double s = 1.0 / std::sqrt(L);
        const double hbar = 1.0 / (std::sqrt(L) - std::sqrt(mu));
        jobs.push_back({"wDG-sc", "1/(sqrt(L)-sqrt(mu))", "hopt", hbar, Scheme::AccelStronglyConvex});
        jobs.push_back({"wDG2-sc", "1/(sqrt(L)-sqrt(mu))", "hopt", hbar, Scheme::AccelStronglyConvex,
                        ZStrategy::PrevIterate});
        jobs.push_back({"NAG-sc", "1/sqrt(L)", "hopt", s, Scheme::NagSc});
        for (const auto& [c, tag] : {std::pair{0.7, "h0.7"}, {0.4, "h0.4"}}) {
            const std::string label = fmt17(c) + "/sqrt(L)";
            jobs.push_back({"wDG-sc", label, tag, c * s, Scheme::AccelStronglyConvex});
            jobs.push_back({"wDG2-sc", label, tag, c * s, Scheme::AccelStronglyConvex, ZStrategy::PrevIterate});
            jobs.push_back({"NAG-sc", label, tag, c * s, Scheme::NagSc});
        }
        jobs.push_back({"wDG2-sc", "sqrt(mu)/(L-mu)", "hlimit", std::sqrt(mu) / (L - mu), Scheme::AccelStronglyConvex,
                        ZStrategy::PrevIterate});
    } else {
        throw std::invalid_argument("bench: expected 'convex' or 'sc', got '" + which + "'");
    }

    std::filesystem::create_directories(out_dir);
    std::vector<std::future<BenchRun>> pending;
    for (const auto& job : jobs)
        pending.push_back(std::async(std::launch::async, execute, job, std::cref(f), std::cref(x0), iterations,
                                     std::cref(out_dir)));

    BenchSummary summary;
    summary.which = which;
    for (auto& p : pending) {
        summary.runs.push_back(p.get());
        const auto& r = summary.runs.back();
        if (r.in_hypothesis && !r.certified) summary.passed = false;
    }

    nlohmann::json j;
    j["which"] = which;
    j["iterations"] = iterations;
    j["passed"] = summary.passed;
    for (const auto& r : summary.runs) {
        nlohmann::json e = {{"method", r.method},  {"h_label", r.h_label},     {"h", r.h},
                            {"csv", r.csv},        {"final_f_gap", r.final_f_gap}, {"in_hypothesis", r.in_hypothesis},
                            {"certified", r.certified}, {"note", r.note}};
        e["theorem"] = r.theorem ? nlohmann::json(theorem_key(*r.theorem)) : nlohmann::json(nullptr);
        j["runs"].push_back(e);
    }
    std::ofstream out(out_dir / "summary.json");
    if (!out) throw std::runtime_error("cannot write " + (out_dir / "summary.json").string());
    out << j.dump(2) << '\n';
    return summary;
}

}  // namespace wdg
