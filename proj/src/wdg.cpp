#include "wdgopt/wdg.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wdg {

WdgKind WdgKind::sum(Dg first, Dg second) {
    WdgKind k(first);
    k.second_ = second;
    return k;
}

Dg WdgKind::second() const {
    if (!second_) throw std::logic_error("second(): not a sum kind");
    return *second_;
}

std::string WdgKind::key() const {
    if (!second_) return dg_key(first_);
    return "sum:" + dg_key(first_) + "+" + dg_key(*second_);
}

bool WdgKind::explicit_in_y() const {
    return first_ == Dg::ExplicitEuler && (!second_ || *second_ == Dg::ExplicitEuler);
}

bool WdgKind::strict() const {
    auto s = [](Dg k) { return k == Dg::Avf || k == Dg::Gonzalez || k == Dg::ItohAbe; };
    return !second_ && s(first_);
}

const std::vector<Dg>& all_dgs() {
    static const std::vector<Dg> kinds{Dg::ExplicitEuler, Dg::ImplicitEuler, Dg::Midpoint,
                                       Dg::Avf,           Dg::Gonzalez,      Dg::ItohAbe};
    return kinds;
}

std::string dg_key(Dg kind) {
    switch (kind) {
        case Dg::ExplicitEuler: return "ee";
        case Dg::ImplicitEuler: return "ie";
        case Dg::Midpoint: return "mid";
        case Dg::Avf: return "avf";
        case Dg::Gonzalez: return "gonzalez";
        case Dg::ItohAbe: return "itohabe";
    }
    throw std::logic_error("bad Dg");
}

std::string dg_label(Dg kind) {
    static const char* labels[] = {"(i)", "(ii)", "(iii)", "(iv)", "(v)", "(vi)"};
    return labels[static_cast<int>(kind)];
}

namespace {

Dg parse_basic(std::string_view key) {
    for (Dg k : all_dgs())
        if (dg_key(k) == key) return k;
    throw std::invalid_argument("unknown weak DG kind: " + std::string(key));
}

Vec itoh_abe(const Objective& f, const Vec& y, const Vec& z) {
    const auto d = y.size();
    Vec out(d);
    Vec lo = z;  // (y_1..y_{i-1}, z_i..z_d)
    for (Eigen::Index i = 0; i < d; ++i) {
        Vec hi = lo;
        hi(i) = y(i);
        const double step = y(i) - z(i);
        if (std::abs(step) < 1e-10 * (1.0 + std::abs(y(i))))
            out(i) = f.grad(0.5 * (lo + hi))(i);
        else
            out(i) = f.difference(hi, lo) / step;
        lo = std::move(hi);
    }
    return out;
}

Vec gonzalez(const Objective& f, const Vec& y, const Vec& z) {
    const Vec m = 0.5 * (y + z);
    const Vec g = f.grad(m);
    const Vec dyz = y - z;
    const double n2 = dyz.squaredNorm();
    if (std::sqrt(n2) < 1e-8 * (1.0 + y.norm())) return g;
    return g + ((f.difference(y, z) - g.dot(dyz)) / n2) * dyz;
}

}  // namespace

WdgKind parse_wdg_kind(std::string_view key) {
    if (key.rfind("sum:", 0) == 0) {
        const auto rest = key.substr(4);
        const auto plus = rest.find('+');
        if (plus == std::string_view::npos) throw std::invalid_argument("sum kind needs 'a+b'");
        return WdgKind::sum(parse_basic(rest.substr(0, plus)), parse_basic(rest.substr(plus + 1)));
    }
    return WdgKind(parse_basic(key));
}

GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = 0.5 * (1.0 - x);
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

Vec avf_quadrature(const Objective& f, const Vec& y, const Vec& z, int nodes) {
    static const GaussLegendre standard = gauss_legendre(kAvfDefaultNodes);
    const GaussLegendre rule = nodes == kAvfDefaultNodes ? standard : gauss_legendre(nodes);
    Vec acc = Vec::Zero(y.size());
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double t = rule.nodes[j];
        acc += rule.weights[j] * f.grad(t * y + (1.0 - t) * z);
    }
    return acc;
}

namespace {

Vec panel(const Objective& f, const Vec& y, const Vec& z, double a, double b) {
    static const GaussLegendre rule = gauss_legendre(kAvfDefaultNodes);
    Vec acc = Vec::Zero(y.size());
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double t = a + (b - a) * rule.nodes[j];
        acc += rule.weights[j] * f.grad(t * y + (1.0 - t) * z);
    }
    return (b - a) * acc;
}

constexpr int kAvfMaxDepth = 16;

// split panels until one rule and its two halves agree; polynomial integrands stop at the first level
Vec adaptive_segment(const Objective& f, const Vec& y, const Vec& z, double a, double b, const Vec& whole, int depth) {
    const double m = 0.5 * (a + b);
    const Vec left = panel(f, y, z, a, m);
    const Vec right = panel(f, y, z, m, b);
    const Vec both = left + right;
    if (depth >= kAvfMaxDepth || !both.allFinite() || (both - whole).norm() <= 1e-14 * (1.0 + both.norm()))
        return both;
    return adaptive_segment(f, y, z, a, m, left, depth + 1) + adaptive_segment(f, y, z, m, b, right, depth + 1);
}

Vec avf(const Objective& f, const Vec& y, const Vec& z) {
    if (f.quadratic) return panel(f, y, z, 0.0, 1.0);
    return adaptive_segment(f, y, z, 0.0, 1.0, panel(f, y, z, 0.0, 1.0), 0);
}

}  // namespace

Vec eval_wdg(Dg kind, const Objective& f, const Vec& y, const Vec& z) {
    switch (kind) {
        case Dg::ExplicitEuler: return f.grad(z);
        case Dg::ImplicitEuler: return f.grad(y);
        case Dg::Midpoint: return f.grad(0.5 * (y + z));
        case Dg::Avf: return avf(f, y, z);
        case Dg::Gonzalez: return gonzalez(f, y, z);
        case Dg::ItohAbe: return itoh_abe(f, y, z);
    }
    throw std::logic_error("bad Dg");
}

Vec eval_wdg(const WdgKind& kind, const Objective& f, const Vec& y, const Vec& z) {
    if (!kind.is_sum()) return eval_wdg(kind.first(), f, y, z);
    if (!f.parts) throw std::invalid_argument(kind.key() + " needs a composite objective");
    return eval_wdg(kind.first(), f.parts->first, y, z) + eval_wdg(kind.second(), f.parts->second, y, z);
}

WdgParams wdg_params(Dg kind, double L, double mu, int d) {
    if (!(mu >= 0.0)) throw std::invalid_argument("wdg_params: mu must be nonnegative");
    const bool needs_L = kind != Dg::ImplicitEuler;
    if (needs_L && !std::isfinite(L)) throw std::invalid_argument("wdg_params: " + dg_key(kind) + " needs finite L");
    if ((kind == Dg::Gonzalez || kind == Dg::ItohAbe) && !(mu > 0.0))
        throw std::invalid_argument("wdg_params: " + dg_key(kind) + " needs mu > 0");
    switch (kind) {
        case Dg::ExplicitEuler: return {L / 2, mu / 2, 0.0};
        case Dg::ImplicitEuler: return {0.0, 0.0, mu / 2};
        case Dg::Midpoint: return {(L + mu) / 8, mu / 4, mu / 4};
        case Dg::Avf: return {L / 6 + mu / 12, mu / 4, mu / 4};
        case Dg::Gonzalez: return {(L + mu) / 8 + (L - mu) * (L - mu) / (16 * mu), mu / 4, 0.0};
        case Dg::ItohAbe: return {d * L * L / mu - mu / 4, mu / 2, -mu / 4};
    }
    throw std::logic_error("bad Dg");
}

WdgParams wdg_params(const WdgKind& kind, const Objective& f) {
    auto of = [](Dg k, const Objective& g) {
        return wdg_params(k, g.smoothness.value_or(INFINITY), g.strong_convexity, g.dim);
    };
    if (!kind.is_sum()) return of(kind.first(), f);
    if (!f.parts) throw std::invalid_argument(kind.key() + " needs a composite objective");
    const auto a = of(kind.first(), f.parts->first);
    const auto b = of(kind.second(), f.parts->second);
    return {a.alpha + b.alpha, a.beta + b.beta, a.gamma + b.gamma};
}

PlWdgParams pl_wdg_params(const WdgKind& kind, double L, int d) {
    if (kind.is_sum()) throw std::invalid_argument("pl_wdg_params: sum kinds are not supported");
    if (!std::isfinite(L) || L < 0.0) throw std::invalid_argument("pl_wdg_params: needs finite L");
    switch (kind.first()) {
        case Dg::ExplicitEuler: return {L / 2, 0.0};
        case Dg::ImplicitEuler: return {L / 2, L};
        case Dg::Midpoint: return {L / 8, L / 2};
        case Dg::Avf: return {0.0, L / 2};
        case Dg::Gonzalez: return {0.0, 5 * L / 8};
        case Dg::ItohAbe: return {0.0, std::sqrt(static_cast<double>(d)) * L};
    }
    throw std::logic_error("bad Dg");
}

}  // namespace wdg
