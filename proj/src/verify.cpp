#include "wdgopt/verify.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace wdg {

namespace {

constexpr long kChunk = 4096;

class Sampler {
public:
    Sampler(const Objective& f, std::uint64_t seed, long chunk) : f_(f) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(chunk)};
        rng_.seed(seq);
        if (f.quadratic && f.strong_convexity > 0.0) {
            Eigen::SelfAdjointEigenSolver<Mat> eig(f.quadratic->Q);
            extreme_ = {eig.eigenvectors().col(0), eig.eigenvectors().col(f.dim - 1)};
        }
    }

    Vec point() {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            Vec x(f_.dim);
            for (int i = 0; i < f_.dim; ++i) {
                std::uniform_real_distribution<double> u(f_.domain.lower(i), f_.domain.upper(i));
                x(i) = u(rng_);
            }
            if (f_.in_domain(x)) return x;
        }
        throw std::runtime_error(f_.name + ": sampling domain has no admissible points");
    }

    // points sharing a base, offset along the extreme Hessian eigendirections
    bool stressed() const { return !extreme_.empty(); }
    Triple eigen_triple() {
        const Vec p = point();
        const double w = 0.5 * (f_.domain.upper - f_.domain.lower).maxCoeff();
        std::uniform_real_distribution<double> t(-w, w);
        std::uniform_int_distribution<int> pick(0, 1);
        auto off = [&] { return Vec(p + t(rng_) * extreme_[pick(rng_)]); };
        return {off(), off(), off()};
    }

    std::mt19937_64& rng() { return rng_; }

private:
    const Objective& f_;
    std::mt19937_64 rng_;
    std::vector<Vec> extreme_;
};

struct ChunkResult {
    double worst = -std::numeric_limits<double>::infinity();
    Triple triple;
};

template <class Body>
VerificationReport sample(const Objective& f, long n, std::uint64_t seed, double tol, Body body) {
    if (n < 1) throw std::invalid_argument("need at least one sample");
    const long chunks = (n + kChunk - 1) / kChunk;
    auto run_chunk = [&](long c) {
        Sampler s(f, seed, c);
        ChunkResult out;
        const long count = std::min(kChunk, n - c * kChunk);
        for (long i = 0; i < count; ++i) {
            Triple t;
            const double viol = body(s, c * kChunk + i, t);
            if (viol > out.worst || std::isnan(viol)) {
                out.worst = std::isnan(viol) ? std::numeric_limits<double>::infinity() : viol;
                out.triple = t;
            }
        }
        return out;
    };

    std::vector<ChunkResult> results(chunks);
    const long workers = std::max(1u, std::thread::hardware_concurrency());
    for (long base = 0; base < chunks; base += workers) {
        std::vector<std::future<ChunkResult>> jobs;
        for (long c = base; c < std::min(chunks, base + workers); ++c)
            jobs.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, run_chunk, c));
        for (long c = base; c < std::min(chunks, base + workers); ++c) results[c] = jobs[c - base].get();
    }

    VerificationReport rep;
    rep.samples = n;
    rep.tol = tol;
    rep.max_violation = -std::numeric_limits<double>::infinity();
    for (auto& r : results)
        if (r.worst > rep.max_violation) {
            rep.max_violation = r.worst;
            rep.worst_case = r.triple;
        }
    rep.passed = rep.max_violation <= tol;
    return rep;
}

double scale(const Objective& f, const Vec& x, const Vec& y) {
    return 1.0 + std::abs(f.eval(y)) + std::abs(f.eval(x));
}

}  // namespace

VerificationReport check_wdg_inequality(const Objective& f, const WdgKind& kind, const WdgParams& p, long n,
                                        std::uint64_t seed, double tol) {
    return sample(f, n, seed, tol, [&](Sampler& s, long i, Triple& t) {
        t = s.stressed() && i % 4 == 3 ? s.eigen_triple() : Triple{s.point(), s.point(), s.point()};
        const Vec g = eval_wdg(kind, f, t.y, t.z);
        const double lhs = f.difference(t.y, t.x);
        const double rhs = g.dot(t.y - t.x) + p.alpha * (t.y - t.z).squaredNorm() -
                           p.beta * (t.z - t.x).squaredNorm() - p.gamma * (t.y - t.x).squaredNorm();
        return (lhs - rhs) / scale(f, t.x, t.y);
    });
}

VerificationReport check_strict_chain_rule(const Objective& f, const WdgKind& kind, long n, std::uint64_t seed,
                                           double tol) {
    return sample(f, n, seed, tol, [&](Sampler& s, long, Triple& t) {
        t.x = s.point();
        t.y = s.point();
        t.z = t.x;
        const double r = f.difference(t.y, t.x) - eval_wdg(kind, f, t.y, t.x).dot(t.y - t.x);
        return std::abs(r) / scale(f, t.x, t.y);
    });
}

VerificationReport check_pl_conditions(const Objective& f, const WdgKind& kind, const PlWdgParams& p, long n,
                                       std::uint64_t seed, double tol) {
    if (!f.pl_constant) throw std::invalid_argument(f.name + " has no PL constant");
    if (!f.optimum) throw std::invalid_argument(f.name + " has no known optimum");
    const double mu = *f.pl_constant;
    return sample(f, n, seed, tol, [&](Sampler& s, long i, Triple& t) {
        t.x = s.point();
        t.y = i % 4 == 3 ? t.x : s.point();
        t.z = t.x;
        const Vec g = eval_wdg(kind, f, t.y, t.x);
        const double d = (t.y - t.x).norm();
        const double chain = f.difference(t.y, t.x) - g.dot(t.y - t.x) - p.alpha * d * d;
        const double pl = -g.norm() + std::sqrt(2.0 * mu * std::max(f.gap(t.x), 0.0)) - p.beta * d;
        return std::max(chain, pl) / scale(f, t.x, t.y);
    });
}

double counterexample_strict_dg(const Mat& Q, const Vec& x) {
    if (x.size() != Q.rows()) throw std::invalid_argument("counterexample: dimension mismatch");
    if (x.isZero(0.0)) throw std::invalid_argument("counterexample: x must be nonzero");
    if (Q.llt().info() != Eigen::Success) throw std::invalid_argument("counterexample: Q must be positive definite");
    const Objective f = make_quadratic(Q, Vec::Zero(x.size()));
    const Vec y = -x;
    return f.gap(x) - eval_wdg(Dg::Midpoint, f, y, x).dot(x - f.optimum->x);
}

std::string theorem_key(Theorem t) {
    switch (t) {
        case Theorem::GradientFlowConvex: return "gf-convex";
        case Theorem::GradientFlowStronglyConvex: return "gf-sc";
        case Theorem::GradientFlowStronglyConvexPlain: return "gf-sc-plain";
        case Theorem::AccelConvex: return "accel-convex";
        case Theorem::AccelStronglyConvex: return "accel-sc";
        case Theorem::PolyakLojasiewicz: return "pl";
    }
    throw std::logic_error("bad Theorem");
}

Theorem parse_theorem(std::string_view key) {
    for (auto t : {Theorem::GradientFlowConvex, Theorem::GradientFlowStronglyConvex,
                   Theorem::GradientFlowStronglyConvexPlain, Theorem::AccelConvex, Theorem::AccelStronglyConvex,
                   Theorem::PolyakLojasiewicz})
        if (theorem_key(t) == key) return t;
    throw std::invalid_argument("unknown theorem: " + std::string(key));
}

Theorem default_theorem(const Trace& tr, const Objective&) {
    switch (tr.scheme) {
        case Scheme::GradientFlow:
        case Scheme::ProximalGradient: {
            if (std::holds_alternative<PlWdgParams>(tr.params)) return Theorem::PolyakLojasiewicz;
            const auto& p = std::get<WdgParams>(tr.params);
            return p.beta + p.gamma > 0.0 ? Theorem::GradientFlowStronglyConvex : Theorem::GradientFlowConvex;
        }
        case Scheme::AccelConvex: return Theorem::AccelConvex;
        case Scheme::AccelStronglyConvex: return Theorem::AccelStronglyConvex;
        case Scheme::NagC:
        case Scheme::NagSc: break;
    }
    throw std::invalid_argument(scheme_key(tr.scheme) + " traces carry no certificate");
}

InitialState initial_state(const Trace& tr, const Objective& f) {
    if (!f.optimum) throw std::invalid_argument(f.name + " has no known optimum");
    if (tr.records.empty()) throw std::invalid_argument("empty trace");
    const auto& r0 = tr.records.front();
    const Vec& v0 = r0.v.size() ? r0.v : r0.x;
    return {r0.f_gap, (r0.x - f.optimum->x).squaredNorm(), (v0 - f.optimum->x).squaredNorm()};
}

namespace {

const WdgParams& weak(const Params& p) {
    if (const auto* w = std::get_if<WdgParams>(&p)) return *w;
    throw std::invalid_argument("theorem needs weak DG params (alpha, beta, gamma)");
}

const PlWdgParams& pl(const Params& p) {
    if (const auto* w = std::get_if<PlWdgParams>(&p)) return *w;
    throw std::invalid_argument("theorem needs PL-type params (alpha, beta)");
}

bool compatible(Theorem t, Scheme s) {
    switch (t) {
        case Theorem::GradientFlowConvex:
        case Theorem::GradientFlowStronglyConvex:
        case Theorem::GradientFlowStronglyConvexPlain:
        case Theorem::PolyakLojasiewicz: return s == Scheme::GradientFlow || s == Scheme::ProximalGradient;
        case Theorem::AccelConvex: return s == Scheme::AccelConvex;
        case Theorem::AccelStronglyConvex: return s == Scheme::AccelStronglyConvex;
    }
    return false;
}

}  // namespace

double contraction_factor(Theorem t, const Params& params, double h, double pl_mu) {
    switch (t) {
        case Theorem::GradientFlowConvex:
        case Theorem::AccelConvex: return 1.0;
        case Theorem::GradientFlowStronglyConvex: {
            const auto& p = weak(params);
            return 1.0 - 2.0 * (p.beta + p.gamma) * h / (1.0 + 2.0 * p.gamma * h);
        }
        case Theorem::GradientFlowStronglyConvexPlain: {
            const auto& p = weak(params);
            return 1.0 / (1.0 + 2.0 * (p.beta + p.gamma) * h);
        }
        case Theorem::AccelStronglyConvex: {
            const auto& p = weak(params);
            return 1.0 / (1.0 + std::sqrt(2.0 * (p.beta + p.gamma)) * h);
        }
        case Theorem::PolyakLojasiewicz: {
            const auto& p = pl(params);
            const double q = 1.0 + p.beta * h;
            return 1.0 - 2.0 * pl_mu * h * (1.0 - p.alpha * h) / (q * q);
        }
    }
    throw std::logic_error("bad Theorem");
}

double rate_bound(Theorem t, const Params& params, double h, const InitialState& init, int k, double pl_mu) {
    if (k < 0) throw std::invalid_argument("rate_bound: k must be nonnegative");
    const double rho = contraction_factor(t, params, h, pl_mu);
    switch (t) {
        case Theorem::GradientFlowConvex:
            if (k < 1) throw std::invalid_argument("rate_bound: k >= 1 required");
            return init.dist0_sq / (2.0 * k * h);
        case Theorem::AccelConvex: {
            if (k < 1) throw std::invalid_argument("rate_bound: k >= 1 required");
            const double A = (k * h) * (k * h);
            return 2.0 * init.vdist0_sq / A;
        }
        case Theorem::GradientFlowStronglyConvex:
        case Theorem::GradientFlowStronglyConvexPlain: return std::pow(rho, k) * init.dist0_sq;
        case Theorem::AccelStronglyConvex:
            return std::pow(rho, k) * (init.gap0 + weak(params).beta * init.vdist0_sq);
        case Theorem::PolyakLojasiewicz: return std::pow(rho, k) * init.gap0;
    }
    throw std::logic_error("bad Theorem");
}

double step_limit(Theorem t, const Params& params, ZStrategy z) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (t) {
        case Theorem::GradientFlowConvex: {
            const auto& p = weak(params);
            return p.alpha > 0.0 ? 1.0 / (2.0 * p.alpha) : inf;
        }
        case Theorem::GradientFlowStronglyConvex:
        case Theorem::GradientFlowStronglyConvexPlain: {
            const auto& p = weak(params);
            return p.alpha + p.beta > 0.0 ? 1.0 / (p.alpha + p.beta) : inf;
        }
        case Theorem::AccelConvex: {
            const auto& p = weak(params);
            return p.alpha > 0.0 ? 1.0 / std::sqrt(2.0 * p.alpha) : inf;
        }
        case Theorem::AccelStronglyConvex: {
            const auto& p = weak(params);
            const double bg = p.beta + p.gamma;
            if (z == ZStrategy::PrevIterate) return p.alpha > p.beta ? bg / (p.alpha - p.beta) / std::sqrt(2.0 * bg) : inf;
            const double gap = std::sqrt(p.alpha + p.gamma) - std::sqrt(bg);
            return gap > 0.0 ? 1.0 / (std::sqrt(2.0) * gap) : inf;
        }
        case Theorem::PolyakLojasiewicz: {
            const auto& p = pl(params);
            return p.alpha > 0.0 ? 1.0 / p.alpha : inf;
        }
    }
    throw std::logic_error("bad Theorem");
}

RateCertificate certify_trace(const Trace& tr, Theorem t, const Objective& f, double slack) {
    if (!compatible(t, tr.scheme))
        throw std::invalid_argument(theorem_key(t) + " does not apply to " + scheme_key(tr.scheme) + " traces");
    const InitialState init = initial_state(tr, f);
    const double mu = t == Theorem::PolyakLojasiewicz ? f.pl_constant.value_or(0.0) : 0.0;
    RateCertificate cert;
    cert.theorem = t;
    cert.params = tr.params;
    cert.h = tr.h;
    cert.slack = slack;
    cert.floor = f.gap_resolution();
    const bool sublinear = t == Theorem::GradientFlowConvex || t == Theorem::AccelConvex;
    for (const auto& r : tr.records) {
        const double B = sublinear && r.k == 0 ? std::numeric_limits<double>::infinity()
                                                : rate_bound(t, tr.params, tr.h, init, r.k, mu);
        const double G = r.f_gap;
        cert.bound.push_back(B);
        cert.observed.push_back(G);
        const bool within = G <= B * (1.0 + slack);
        const bool resolved = G <= cert.floor;
        if (!within && resolved) ++cert.floor_steps;
        if (!within && !resolved && !cert.first_violation) cert.first_violation = r.k;
    }
    if (tr.aborted && !cert.first_violation) cert.first_violation = static_cast<int>(tr.records.size());
    return cert;
}

LyapunovSeries lyapunov_series(const Trace& tr, Theorem t, const Objective& f) {
    if (!compatible(t, tr.scheme))
        throw std::invalid_argument(theorem_key(t) + " does not apply to " + scheme_key(tr.scheme) + " traces");
    if (!f.optimum) throw std::invalid_argument(f.name + " has no known optimum");
    const Vec& xs = f.optimum->x;
    const double mu = t == Theorem::PolyakLojasiewicz ? f.pl_constant.value_or(0.0) : 0.0;
    LyapunovSeries s;
    s.rate = contraction_factor(t, tr.params, tr.h, mu);
    const double gres = f.gap_resolution();
    const double xres2 = f.x_resolution * f.x_resolution;
    double weight = 0.0;
    for (const auto& r : tr.records) {
        const double kh = r.k * tr.h;
        double E = 0.0;
        switch (t) {
            case Theorem::GradientFlowConvex:
                E = kh * r.f_gap + 0.5 * (r.x - xs).squaredNorm();
                weight = kh * gres + 0.5 * xres2;
                break;
            case Theorem::GradientFlowStronglyConvex:
            case Theorem::GradientFlowStronglyConvexPlain: {
                const auto& p = weak(tr.params);
                E = r.f_gap + (p.beta + p.gamma) * (r.x - xs).squaredNorm();
                weight = gres + std::abs(p.beta + p.gamma) * xres2;
                break;
            }
            case Theorem::AccelConvex:
                E = kh * kh * r.f_gap + 2.0 * (r.v - xs).squaredNorm();
                weight = kh * kh * gres + 2.0 * xres2;
                break;
            case Theorem::AccelStronglyConvex: {
                const auto& p = weak(tr.params);
                E = r.f_gap + (p.beta + p.gamma) * (r.v - xs).squaredNorm();
                weight = gres + std::abs(p.beta + p.gamma) * xres2;
                break;
            }
            case Theorem::PolyakLojasiewicz:
                E = r.f_gap;
                weight = gres;
                break;
        }
        s.energy.push_back(E);
        s.discounted.push_back(s.rate > 0.0 ? E * std::exp(-r.k * std::log(s.rate))
                                            : std::numeric_limits<double>::quiet_NaN());
        s.floor = std::max(s.floor, weight);
    }
    return s;
}

MonotonicityReport check_lyapunov_monotone(const LyapunovSeries& s, double slack) {
    MonotonicityReport rep;
    if (s.energy.empty()) return rep;
    const double base = 1.0 + s.energy.front();
    double rk = 1.0;  // rate^k
    for (std::size_t k = 0; k + 1 < s.energy.size(); ++k) {
        const double rk1 = rk * s.rate;
        const double excess = s.energy[k + 1] - s.rate * s.energy[k];
        const double allowed = slack * rk1 * base;
        if (!(excess <= allowed)) {
            if (excess <= allowed + s.floor) {
                ++rep.floor_steps;
            } else {
                rep.passed = false;
                if (!rep.first_violation) rep.first_violation = static_cast<int>(k + 1);
            }
        }
        if (rk1 > 0.0 && std::isfinite(excess)) {
            if (excess > allowed && excess <= allowed + s.floor) {
                // resolved by the precision floor; not counted as excess
            } else {
                rep.max_excess = std::max(rep.max_excess, excess / rk1 / base);
            }
        } else if (!std::isfinite(excess)) {
            rep.max_excess = std::numeric_limits<double>::infinity();
        }
        rk = rk1;
    }
    return rep;
}

}  // namespace wdg
