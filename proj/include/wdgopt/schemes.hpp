#pragma once

#include "wdgopt/nonlinear.hpp"
#include "wdgopt/problems.hpp"
#include "wdgopt/wdg.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace wdg {

enum class Scheme { GradientFlow, AccelConvex, AccelStronglyConvex, ProximalGradient, NagC, NagSc };
enum class ZStrategy { Theorem, PrevIterate, NextIterate };

std::string scheme_key(Scheme s);
Scheme parse_scheme(std::string_view key);
std::string z_strategy_key(ZStrategy z);
ZStrategy parse_z_strategy(std::string_view key);

using Params = std::variant<WdgParams, PlWdgParams>;

struct SchemeConfig {
    Scheme scheme = Scheme::GradientFlow;
    std::optional<double> h;  // empty: the largest step the matching theorem admits
    int iterations = 100;
    ZStrategy z_strategy = ZStrategy::Theorem;
    Vec x0;
    std::optional<Vec> v0;  // empty: v0 = x0
    SolveConfig solver;
};

struct TraceRecord {
    int k = 0;
    Vec x;
    Vec v;  // empty for single-variable schemes
    Vec z;  // evaluation point used to leave this state; empty if none
    double f_gap = 0.0;
    int inner_iters = 0;
    double residual = 0.0;  // implicit-solve residual of the step that produced x
};

struct Trace {
    Scheme scheme = Scheme::GradientFlow;
    WdgKind kind = Dg::ExplicitEuler;
    ZStrategy z_strategy = ZStrategy::Theorem;
    double h = 0.0;
    Params params;
    bool implicit = false;
    std::vector<TraceRecord> records;
    bool aborted = false;
    std::string abort_reason;
};

// Weak-DG params when f is convex, PL-type params when f only carries a PL constant.
Params default_params(const Objective& f, const WdgKind& kind);

// Unbounded admissible steps are capped at this multiple of 1/(2(beta+gamma)).
inline constexpr double kUnboundedStepCap = 1e6;

double resolve_step_size(Scheme scheme, const Params& params, ZStrategy z = ZStrategy::Theorem);

Trace run_gradient_flow(const Objective& f, const WdgKind& kind, const SchemeConfig& cfg);
Trace run_gradient_flow(const Objective& f, const WdgKind& kind, const Params& params, const SchemeConfig& cfg);
Trace run_accel_convex(const Objective& f, const WdgKind& kind, const SchemeConfig& cfg);
Trace run_accel_sc(const Objective& f, const WdgKind& kind, const SchemeConfig& cfg);
Trace run_proximal_gradient(const CompositeObjective& fc, const SchemeConfig& cfg);
Trace run_nag_c(const Objective& f, const SchemeConfig& cfg);
Trace run_nag_sc(const Objective& f, const SchemeConfig& cfg);

// dispatch on cfg.scheme; ProximalGradient needs f.parts
Trace run_scheme(const Objective& f, const WdgKind& kind, const SchemeConfig& cfg);

}  // namespace wdg
