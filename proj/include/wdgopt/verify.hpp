#pragma once

#include "wdgopt/schemes.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wdg {

struct Triple {
    Vec x, y, z;
};

struct VerificationReport {
    long samples = 0;
    double max_violation = 0.0;
    Triple worst_case;
    double tol = 0.0;
    bool passed = true;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

VerificationReport check_wdg_inequality(const Objective& f, const WdgKind& kind, const WdgParams& params, long n,
                                        std::uint64_t seed = kDefaultSeed, double tol = 1e-8);
// max |f(y) - f(x) - <grad(y, x), y - x>| over n pairs, relative
VerificationReport check_strict_chain_rule(const Objective& f, const WdgKind& kind, long n,
                                           std::uint64_t seed = kDefaultSeed, double tol = 1e-9);
VerificationReport check_pl_conditions(const Objective& f, const WdgKind& kind, const PlWdgParams& params, long n,
                                       std::uint64_t seed = kDefaultSeed, double tol = 1e-8);

// f(x) - f* - <grad(y, x), x - x*> for f = x^T Q x / 2, midpoint DG and y = -x
double counterexample_strict_dg(const Mat& Q, const Vec& x);

enum class Theorem {
    GradientFlowConvex,
    GradientFlowStronglyConvex,       // sharpened factor 1 - 2(b+g)h/(1+2gh)
    GradientFlowStronglyConvexPlain,  // factor 1/(1 + 2(b+g)h)
    AccelConvex,
    AccelStronglyConvex,
    PolyakLojasiewicz,
};

std::string theorem_key(Theorem t);
Theorem parse_theorem(std::string_view key);
// the theorem whose hypotheses a trace was produced under
Theorem default_theorem(const Trace& tr, const Objective& f);

struct InitialState {
    double gap0 = 0.0;
    double dist0_sq = 0.0;   // |x0 - x*|^2
    double vdist0_sq = 0.0;  // |v0 - x*|^2
};

InitialState initial_state(const Trace& tr, const Objective& f);

// per-step factor for the linear-rate theorems; 1 for the sublinear ones
double contraction_factor(Theorem t, const Params& params, double h, double pl_mu = 0.0);
double rate_bound(Theorem t, const Params& params, double h, const InitialState& init, int k, double pl_mu = 0.0);
// largest h the theorem's hypotheses admit (z-strategy aware for the accelerated case)
double step_limit(Theorem t, const Params& params, ZStrategy z = ZStrategy::Theorem);

struct RateCertificate {
    Theorem theorem = Theorem::GradientFlowConvex;
    Params params;
    double h = 0.0;
    std::vector<double> bound;
    std::vector<double> observed;
    std::optional<int> first_violation;
    double slack = 1e-8;
    // observed values below this are at the limit of double precision and compared against it
    double floor = 0.0;
    int floor_steps = 0;
    bool passed() const { return !first_violation.has_value(); }
};

RateCertificate certify_trace(const Trace& tr, Theorem t, const Objective& f, double slack = 1e-8);

struct LyapunovSeries {
    std::vector<double> energy;
    std::vector<double> discounted;  // energy / rate^k; equals energy for the sublinear theorems
    double rate = 1.0;
    double floor = 0.0;
};

LyapunovSeries lyapunov_series(const Trace& tr, Theorem t, const Objective& f);

struct MonotonicityReport {
    bool passed = true;
    std::optional<int> first_violation;
    double max_excess = 0.0;  // relative to 1 + E(0)
    int floor_steps = 0;
};

// E(k+1) <= rate E(k) + slack rate^{k+1} (1 + E(0)), i.e. the discounted sequence is nonincreasing
MonotonicityReport check_lyapunov_monotone(const LyapunovSeries& s, double slack = 1e-10);

}  // namespace wdg
