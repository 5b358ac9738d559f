#include "wdgopt/schemes.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

namespace wdg {

std::string scheme_key(Scheme s) {
    switch (s) {
        case Scheme::GradientFlow: return "gradient-flow";
        case Scheme::AccelConvex: return "accel-convex";
        case Scheme::AccelStronglyConvex: return "accel-sc";
        case Scheme::ProximalGradient: return "prox";
        case Scheme::NagC: return "nag-c";
        case Scheme::NagSc: return "nag-sc";
    }
    throw std::logic_error("bad Scheme");
}

Scheme parse_scheme(std::string_view key) {
    for (auto s : {Scheme::GradientFlow, Scheme::AccelConvex, Scheme::AccelStronglyConvex, Scheme::ProximalGradient,
                   Scheme::NagC, Scheme::NagSc})
        if (scheme_key(s) == key) return s;
    throw std::invalid_argument("unknown scheme: " + std::string(key));
}

std::string z_strategy_key(ZStrategy z) {
    switch (z) {
        case ZStrategy::Theorem: return "theorem";
        case ZStrategy::PrevIterate: return "prev";
        case ZStrategy::NextIterate: return "next";
    }
    throw std::logic_error("bad ZStrategy");
}

ZStrategy parse_z_strategy(std::string_view key) {
    for (auto z : {ZStrategy::Theorem, ZStrategy::PrevIterate, ZStrategy::NextIterate})
        if (z_strategy_key(z) == key) return z;
    throw std::invalid_argument("unknown z strategy: " + std::string(key));
}

Params default_params(const Objective& f, const WdgKind& kind) {
    if (f.convex) return wdg_params(kind, f);
    if (f.pl_constant) return pl_wdg_params(kind, f.L(), f.dim);
    throw std::invalid_argument(f.name + " is neither convex nor PL");
}

namespace {

double capped(const WdgParams& p) {
    const double m = 2.0 * (p.beta + p.gamma);
    if (!(m > 0.0)) throw std::invalid_argument("step size unbounded and beta + gamma = 0: no cap available");
    return kUnboundedStepCap / m;
}

}  // namespace

double resolve_step_size(Scheme scheme, const Params& params, ZStrategy z) {
    if (const auto* pl = std::get_if<PlWdgParams>(&params)) {
        if (scheme != Scheme::GradientFlow) throw std::invalid_argument("PL-type params only support gradient flow");
        const double denom = 2.0 * pl->alpha + pl->beta;
        if (!(denom > 0.0)) throw std::invalid_argument("PL-type params give no step bound");
        return 1.0 / denom;
    }
    const auto& p = std::get<WdgParams>(params);
    if (p.beta + p.gamma < 0.0) throw std::invalid_argument("weak DG params need beta + gamma >= 0");
    switch (scheme) {
        case Scheme::GradientFlow:
        case Scheme::ProximalGradient:
            if (p.beta + p.gamma > 0.0) return p.alpha + p.beta > 0.0 ? 1.0 / (p.alpha + p.beta) : capped(p);
            return p.alpha > 0.0 ? 1.0 / (2.0 * p.alpha) : capped(p);
        case Scheme::AccelConvex:
        case Scheme::NagC:
        case Scheme::NagSc:
            return p.alpha > 0.0 ? 1.0 / std::sqrt(2.0 * p.alpha) : capped(p);
        case Scheme::AccelStronglyConvex: {
            if (!(p.beta + p.gamma > 0.0)) throw std::invalid_argument("accelerated strongly convex scheme needs beta + gamma > 0");
            if (z == ZStrategy::PrevIterate) {
                if (p.alpha <= p.beta) return capped(p);
                const double m = 2.0 * (p.beta + p.gamma);
                return (p.beta + p.gamma) / (p.alpha - p.beta) / std::sqrt(m);
            }
            const double gap = std::sqrt(p.alpha + p.gamma) - std::sqrt(p.beta + p.gamma);
            if (!(gap > 0.0)) return capped(p);
            return 1.0 / (std::sqrt(2.0) * gap);
        }
    }
    throw std::logic_error("bad Scheme");
}

namespace {

struct StepResult {
    Vec x;
    int iters = 0;
    double residual = 0.0;
};

// Solve R(X) = 0 where X - s R(X) is the natural fixed-point map.
// triangular: R_i depends on X_1..X_i only, so coordinates are solved one at a time.
// Scalar equations always take the bracketing path.
StepResult solve_implicit(const VectorMap& R, double s, const Vec& warm, const SolveConfig& cfg, bool triangular) {
    StepResult out;
    if (triangular || warm.size() == 1) {
        Vec X = warm;
        for (Eigen::Index i = 0; i < X.size(); ++i) {
            auto g = [&](double t) {
                Vec Y = X;
                Y(i) = t;
                return R(Y)(i);
            };
            const double a = X(i);
            const double ga = g(a);
            const double b = a - s * ga;
            if (b == a) continue;
            const auto root = scalar_root(g, a, b, cfg);
            X(i) = root.root;
            out.iters += root.iterations;
        }
        out.x = std::move(X);
    } else {
        SolveConfig fp = cfg;
        fp.tol = s * cfg.tol;
        try {
            auto r = fixed_point([&](const Vec& X) -> Vec { return X - s * R(X); }, warm, fp);
            out.x = std::move(r.x);
            out.iters = r.iterations;
        } catch (const NonConvergence&) {
            auto r = newton(R, warm, cfg);
            out.x = std::move(r.x);
            out.iters = r.iterations;
        }
    }

    // refine past tol: the outer rate bounds resolve far smaller errors than tol
    Vec r = R(out.x);
    double rn = r.norm();
    for (int polish = 0; polish < 3 && rn > 0.0; ++polish) {
        const Mat J = forward_difference_jacobian(R, out.x, r);
        Eigen::FullPivLU<Mat> lu(J);
        if (!lu.isInvertible()) break;
        const Vec cand = out.x - lu.solve(r);
        const Vec rc = R(cand);
        const double rcn = rc.norm();
        if (!(rcn < rn)) break;
        out.x = cand;
        ++out.iters;
        const bool big_gain = rcn < 0.5 * rn;
        r = rc;
        rn = rcn;
        if (!big_gain) break;
    }
    if (!(rn <= cfg.tol)) throw NonConvergence("implicit step residual " + std::to_string(rn) + " above tolerance");
    out.residual = rn;
    return out;
}

bool coordinatewise(const WdgKind& kind) { return !kind.is_sum() && kind.first() == Dg::ItohAbe; }

Vec initial_v(const SchemeConfig& cfg) {
    if (!cfg.v0) return cfg.x0;
    if (cfg.v0->size() != cfg.x0.size()) throw std::invalid_argument("v0 and x0 dimensions differ");
    return *cfg.v0;
}

void check_config(const Objective& f, const SchemeConfig& cfg) {
    if (cfg.iterations < 1) throw std::invalid_argument("iterations must be at least 1");
    if (cfg.x0.size() != f.dim) throw std::invalid_argument("x0 has wrong dimension for " + f.name);
    if (cfg.h && !(*cfg.h > 0.0)) throw std::invalid_argument("step size must be positive");
    cfg.solver.validate();
}

TraceRecord record(const Objective& f, int k, const Vec& x, const Vec& v = Vec()) {
    TraceRecord r;
    r.k = k;
    r.x = x;
    r.v = v;
    r.f_gap = f.gap(x);
    return r;
}

// closed-form resolvent for a quadratic implicit part: X/h + A X = rhs
std::optional<Vec> quadratic_resolvent(const Objective& f, const WdgKind& kind, const Vec& x, double h) {
    const Objective* implicit_part = nullptr;
    Vec explicit_grad = Vec::Zero(x.size());
    if (!kind.is_sum() && kind.first() == Dg::ImplicitEuler) {
        implicit_part = &f;
    } else if (kind.is_sum() && kind.first() == Dg::ExplicitEuler && kind.second() == Dg::ImplicitEuler && f.parts) {
        implicit_part = &f.parts->second;
        explicit_grad = f.parts->first.grad(x);
    }
    if (!implicit_part || !implicit_part->quadratic) return std::nullopt;
    const auto& q = *implicit_part->quadratic;
    const Mat A = Mat::Identity(x.size(), x.size()) / h + q.Q;
    return A.ldlt().solve(x / h - explicit_grad - q.b);
}

}  // namespace

Trace run_gradient_flow(const Objective& f, const WdgKind& kind, const Params& params, const SchemeConfig& cfg) {
    check_config(f, cfg);
    Trace tr;
    tr.scheme = cfg.scheme == Scheme::ProximalGradient ? Scheme::ProximalGradient : Scheme::GradientFlow;
    tr.kind = kind;
    tr.params = params;
    tr.h = cfg.h ? *cfg.h : resolve_step_size(Scheme::GradientFlow, params);
    tr.implicit = !kind.explicit_in_y();
    const double h = tr.h;

    Vec x = cfg.x0;
    tr.records.reserve(cfg.iterations + 1);
    tr.records.push_back(record(f, 0, x));
    for (int k = 0; k < cfg.iterations; ++k) {
        TraceRecord next;
        if (!tr.implicit) {
            x = x - h * eval_wdg(kind, f, x, x);
            next = record(f, k + 1, x);
        } else {
            const Vec xk = x;
            auto R = [&](const Vec& X) -> Vec { return (X - xk) / h + eval_wdg(kind, f, X, xk); };
            StepResult step;
            try {
                if (auto closed = quadratic_resolvent(f, kind, xk, h)) {
                    step.x = *closed;
                    step.iters = 1;
                    step.residual = R(step.x).norm();
                } else {
                    step = solve_implicit(R, h, xk, cfg.solver, coordinatewise(kind));
                }
            } catch (const SolverError& e) {
                tr.aborted = true;
                tr.abort_reason = "step " + std::to_string(k) + ": " + e.what();
                break;
            }
            x = step.x;
            next = record(f, k + 1, x);
            next.inner_iters = step.iters;
            next.residual = step.residual;
        }
        tr.records.push_back(std::move(next));
    }
    return tr;
}

Trace run_gradient_flow(const Objective& f, const WdgKind& kind, const SchemeConfig& cfg) {
    return run_gradient_flow(f, kind, default_params(f, kind), cfg);
}

Trace run_accel_convex(const Objective& f, const WdgKind& kind, const SchemeConfig& cfg) {
    check_config(f, cfg);
    Trace tr;
    tr.scheme = Scheme::AccelConvex;
    tr.kind = kind;
    tr.z_strategy = cfg.z_strategy;
    const auto p = wdg_params(kind, f);
    if (p.beta < 0.0 || p.gamma < 0.0) throw std::invalid_argument("accelerated convex scheme needs beta, gamma >= 0");
    tr.params = p;
    tr.h = cfg.h ? *cfg.h : resolve_step_size(Scheme::AccelConvex, p);
    const bool next_z = cfg.z_strategy == ZStrategy::NextIterate;
    tr.implicit = next_z || !kind.explicit_in_y();
    const double h = tr.h;

    Vec x = cfg.x0;
    Vec v = initial_v(cfg);
    tr.records.push_back(record(f, 0, x, v));
    for (int k = 0; k < cfg.iterations; ++k) {
        const double kk = k, a = 2.0 * kk + 1.0, b = (kk + 1.0) * (kk + 1.0);
        const double c = a * h * h / 4.0;
        Vec z = cfg.z_strategy == ZStrategy::PrevIterate ? x : Vec(x + (a / b) * (v - x));
        StepResult step;
        Vec v_next;
        if (!tr.implicit) {
            v_next = v - c * eval_wdg(kind, f, z, z);
            step.x = (kk * kk * x + a * v_next) / b;
        } else {
            auto zof = [&](const Vec& X) -> const Vec& { return next_z ? X : z; };
            auto V = [&](const Vec& X) -> Vec { return (b * X - kk * kk * x) / a; };
            auto R = [&](const Vec& X) -> Vec { return eval_wdg(kind, f, X, zof(X)) - (v - V(X)) / c; };
            try {
                step = solve_implicit(R, a * c / b, x, cfg.solver, coordinatewise(kind) && !next_z);
            } catch (const SolverError& e) {
                tr.aborted = true;
                tr.abort_reason = "step " + std::to_string(k) + ": " + e.what();
                break;
            }
            if (next_z) z = step.x;
            v_next = v - c * eval_wdg(kind, f, step.x, z);
        }
        tr.records.back().z = z;
        x = step.x;
        v = v_next;
        auto rec = record(f, k + 1, x, v);
        rec.inner_iters = step.iters;
        rec.residual = step.residual;
        tr.records.push_back(std::move(rec));
    }
    return tr;
}

Trace run_accel_sc(const Objective& f, const WdgKind& kind, const SchemeConfig& cfg) {
    check_config(f, cfg);
    Trace tr;
    tr.scheme = Scheme::AccelStronglyConvex;
    tr.kind = kind;
    tr.z_strategy = cfg.z_strategy;
    const auto p = wdg_params(kind, f);
    const double bg = p.beta + p.gamma;
    if (!(bg > 0.0)) throw std::invalid_argument("accelerated strongly convex scheme needs beta + gamma > 0");
    tr.params = p;
    tr.h = cfg.h ? *cfg.h : resolve_step_size(Scheme::AccelStronglyConvex, p, cfg.z_strategy);
    const bool next_z = cfg.z_strategy == ZStrategy::NextIterate;
    tr.implicit = next_z || !kind.explicit_in_y();

    const double m = 2.0 * bg;
    const double ht = std::sqrt(m) * tr.h;
    const double bz = p.beta / bg, gx = p.gamma / bg;

    Vec x = cfg.x0;
    Vec v = initial_v(cfg);
    tr.records.push_back(record(f, 0, x, v));
    for (int k = 0; k < cfg.iterations; ++k) {
        Vec z = cfg.z_strategy == ZStrategy::Theorem ? Vec(((1.0 + ht) * x + ht * v) / (1.0 + 2.0 * ht)) : x;
        StepResult step;
        Vec v_next;
        if (!tr.implicit) {
            const Vec g = eval_wdg(kind, f, z, z);
            // eliminate x^{k+1} = (x + ht v^{k+1}) / (1 + ht) from the v-equation
            const double lhs = 1.0 + ht - gx * ht * ht / (1.0 + ht);
            v_next = (v + ht * (bz * z + gx * x / (1.0 + ht) - g / m)) / lhs;
            step.x = (x + ht * v_next) / (1.0 + ht);
        } else {
            auto zof = [&](const Vec& X) -> const Vec& { return next_z ? X : z; };
            auto V = [&](const Vec& X) -> Vec { return ((1.0 + ht) * X - x) / ht; };
            auto R = [&](const Vec& X) -> Vec {
                const Vec VX = V(X);
                return eval_wdg(kind, f, X, zof(X)) - m * (bz * zof(X) + gx * X - VX - (VX - v) / ht);
            };
            const double den = (1.0 + ht) * (1.0 + ht) - (next_z ? 1.0 : gx) * ht * ht;
            const double s = den > 0.0 ? ht * ht / (m * den) : ht * ht / m;
            try {
                step = solve_implicit(R, s, x, cfg.solver, coordinatewise(kind) && !next_z);
            } catch (const SolverError& e) {
                tr.aborted = true;
                tr.abort_reason = "step " + std::to_string(k) + ": " + e.what();
                break;
            }
            if (next_z) z = step.x;
            v_next = (v + ht * (bz * z + gx * step.x - eval_wdg(kind, f, step.x, z) / m)) / (1.0 + ht);
        }
        tr.records.back().z = z;
        x = step.x;
        v = v_next;
        auto rec = record(f, k + 1, x, v);
        rec.inner_iters = step.iters;
        rec.residual = step.residual;
        tr.records.push_back(std::move(rec));
    }
    return tr;
}

Trace run_proximal_gradient(const CompositeObjective& fc, const SchemeConfig& cfg) {
    SchemeConfig c = cfg;
    c.scheme = Scheme::ProximalGradient;
    const WdgKind kind = WdgKind::sum(Dg::ExplicitEuler, Dg::ImplicitEuler);
    return run_gradient_flow(fc.sum, kind, wdg_params(kind, fc.sum), c);
}

namespace {

Trace run_nag(const Objective& f, const SchemeConfig& cfg, bool strongly_convex) {
    check_config(f, cfg);
    Trace tr;
    tr.scheme = strongly_convex ? Scheme::NagSc : Scheme::NagC;
    tr.kind = Dg::ExplicitEuler;
    const auto p = wdg_params(Dg::ExplicitEuler, f.L(), f.strong_convexity, f.dim);
    tr.params = p;
    tr.h = cfg.h ? *cfg.h : resolve_step_size(tr.scheme, p);
    const double h = tr.h;
    const double sm = std::sqrt(f.strong_convexity) * h;
    const double momentum_sc = (1.0 - sm) / (1.0 + sm);
    if (strongly_convex && !(f.strong_convexity > 0.0))
        throw std::invalid_argument("NAG-sc needs a strongly convex objective");

    Vec x = cfg.x0;
    Vec y = x;
    tr.records.push_back(record(f, 0, x, y));
    for (int k = 0; k < cfg.iterations; ++k) {
        const Vec y_next = x - h * h * f.grad(x);
        const double beta = strongly_convex ? momentum_sc : static_cast<double>(k) / (k + 3.0);
        x = y_next + beta * (y_next - y);
        y = y_next;
        tr.records.push_back(record(f, k + 1, x, y));
    }
    return tr;
}

}  // namespace

Trace run_nag_c(const Objective& f, const SchemeConfig& cfg) { return run_nag(f, cfg, false); }
Trace run_nag_sc(const Objective& f, const SchemeConfig& cfg) { return run_nag(f, cfg, true); }

Trace run_scheme(const Objective& f, const WdgKind& kind, const SchemeConfig& cfg) {
    switch (cfg.scheme) {
        case Scheme::GradientFlow: return run_gradient_flow(f, kind, cfg);
        case Scheme::AccelConvex: return run_accel_convex(f, kind, cfg);
        case Scheme::AccelStronglyConvex: return run_accel_sc(f, kind, cfg);
        case Scheme::ProximalGradient: {
            if (!f.parts) throw std::invalid_argument("proximal gradient needs a composite problem");
            return run_proximal_gradient(make_composite(f.parts->first, f.parts->second), cfg);
        }
        case Scheme::NagC: return run_nag_c(f, cfg);
        case Scheme::NagSc: return run_nag_sc(f, cfg);
    }
    throw std::logic_error("bad Scheme");
}

}  // namespace wdg
