#include "wdgopt/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace wdg {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trace_csv(std::ostream& out, const Trace& tr, const RateCertificate* cert, const LyapunovSeries* lyap) {
    out << "k,t,f_gap,bound,lyapunov,inner_iters\n";
    for (std::size_t i = 0; i < tr.records.size(); ++i) {
        const auto& r = tr.records[i];
        const double bound = cert && i < cert->bound.size() ? cert->bound[i] : NAN;
        const double energy = lyap && i < lyap->energy.size() ? lyap->energy[i] : NAN;
        out << r.k << ',' << fmt17(r.k * tr.h) << ',' << fmt17(r.f_gap) << ',' << fmt17(bound) << ','
            << fmt17(energy) << ',' << r.inner_iters << '\n';
    }
}

void write_trajectory_csv(std::ostream& out, const Trace& tr) {
    out << "k,f_gap";
    const auto d = tr.records.empty() ? 0 : tr.records.front().x.size();
    for (Eigen::Index i = 0; i < d; ++i) out << ",x" << i + 1;
    out << '\n';
    for (const auto& r : tr.records) {
        out << r.k << ',' << fmt17(r.f_gap);
        for (Eigen::Index i = 0; i < d; ++i) out << ',' << fmt17(r.x(i));
        out << '\n';
    }
}

namespace {

nlohmann::json vec(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// JSON has no inf/nan
nlohmann::json num(double v) {
    if (std::isfinite(v)) return v;
    return fmt17(v);
}

}  // namespace

nlohmann::json to_json(const Params& p) {
    if (const auto* w = std::get_if<WdgParams>(&p)) return {{"alpha", w->alpha}, {"beta", w->beta}, {"gamma", w->gamma}};
    const auto& q = std::get<PlWdgParams>(p);
    return {{"alpha", q.alpha}, {"beta", q.beta}};
}

nlohmann::json to_json(const VerificationReport& r) {
    return {{"samples", r.samples},
            {"max_violation", num(r.max_violation)},
            {"tol", r.tol},
            {"passed", r.passed},
            {"worst_case", {{"x", vec(r.worst_case.x)}, {"y", vec(r.worst_case.y)}, {"z", vec(r.worst_case.z)}}}};
}

nlohmann::json to_json(const RateCertificate& c) {
    nlohmann::json j = {{"theorem", theorem_key(c.theorem)},
                        {"params", to_json(c.params)},
                        {"h", c.h},
                        {"slack", c.slack},
                        {"floor", c.floor},
                        {"floor_steps", c.floor_steps},
                        {"passed", c.passed()},
                        {"steps", c.observed.size()}};
    j["first_violation"] = c.first_violation ? nlohmann::json(*c.first_violation) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const MonotonicityReport& m) {
    nlohmann::json j = {{"passed", m.passed}, {"max_excess", num(m.max_excess)}, {"floor_steps", m.floor_steps}};
    j["first_violation"] = m.first_violation ? nlohmann::json(*m.first_violation) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json trace_summary(const Trace& tr) {
    int inner = 0;
    double worst_residual = 0.0;
    for (const auto& r : tr.records) {
        inner += r.inner_iters;
        worst_residual = std::max(worst_residual, r.residual);
    }
    nlohmann::json j = {{"scheme", scheme_key(tr.scheme)},
                        {"wdg", tr.kind.key()},
                        {"z_strategy", z_strategy_key(tr.z_strategy)},
                        {"h", tr.h},
                        {"params", to_json(tr.params)},
                        {"iterations", tr.records.empty() ? 0 : tr.records.back().k},
                        {"final_f_gap", tr.records.empty() ? nlohmann::json(nullptr) : num(tr.records.back().f_gap)},
                        {"inner_iters_total", inner},
                        {"max_residual", worst_residual},
                        {"aborted", tr.aborted}};
    if (tr.aborted) j["abort_reason"] = tr.abort_reason;
    return j;
}

}  // namespace wdg
