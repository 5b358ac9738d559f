#include "wdgopt/problems.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace wdg {

Box Box::cube(int dim, double half_width) {
    return {Vec::Constant(dim, -half_width), Vec::Constant(dim, half_width)};
}

bool Box::contains(const Vec& x) const {
    return x.size() == lower.size() && (x.array() >= lower.array()).all() &&
           (x.array() <= upper.array()).all();
}

double Objective::difference(const Vec& a, const Vec& b) const {
    if (diff) return diff(a, b);
    return eval(a) - eval(b);
}

double Objective::gap(const Vec& x) const {
    if (!optimum) return std::numeric_limits<double>::quiet_NaN();
    if (quadratic) {
        const Vec e = x - optimum->x;
        return 0.5 * e.dot(quadratic->Q * e);
    }
    return difference(x, optimum->x);
}

double Objective::gap_resolution() const {
    if (!smoothness) return 0.0;
    return 0.5 * *smoothness * x_resolution * x_resolution;
}

double Objective::L() const {
    if (!smoothness) throw std::invalid_argument(name + ": smoothness constant unknown");
    return *smoothness;
}

bool Objective::in_domain(const Vec& x) const {
    if (x.size() != dim) return false;
    return admissible ? admissible(x) : true;
}

Objective make_quadratic(const Mat& Q, const Vec& b, double c, std::string name) {
    const auto d = Q.rows();
    if (d == 0 || Q.cols() != d || b.size() != d)
        throw std::invalid_argument("make_quadratic: dimension mismatch");
    const double scale = 1.0 + Q.cwiseAbs().maxCoeff();
    if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("make_quadratic: Q is not symmetric");

    Eigen::SelfAdjointEigenSolver<Mat> eig(Q);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    if (lmin < -1e-12 * scale) throw std::invalid_argument("make_quadratic: Q is indefinite");

    Objective f;
    f.name = std::move(name);
    f.dim = static_cast<int>(d);
    f.eval = [Q, b, c](const Vec& x) { return 0.5 * x.dot(Q * x) + b.dot(x) + c; };
    f.grad = [Q, b](const Vec& x) -> Vec { return Q * x + b; };
    f.diff = [Q, b](const Vec& x, const Vec& y) {
        const Vec m = 0.5 * (x + y);
        return (x - y).dot(Q * m + b);
    };
    f.smoothness = std::max(lmax, 0.0);
    f.strong_convexity = std::max(lmin, 0.0);
    f.convex = true;
    f.domain = Box::cube(f.dim, 5.0);
    f.quadratic = QuadraticForm{Q, b, c};

    if (lmin > 0.0) {
        Vec xs = Q.ldlt().solve(-b);
        const double fs = f.eval(xs);
        f.optimum = Optimum{xs, fs};
        f.pl_constant = lmin;
        const double cond = lmax / lmin;
        constexpr double eps = std::numeric_limits<double>::epsilon();
        f.x_resolution = xs.isZero(0.0) && b.isZero(0.0) ? 0.0 : 8.0 * eps * cond * (1.0 + xs.norm());
    }
    return f;
}

Objective quadratic_2d() {
    // 0.001(x1-x2)^2 + 0.1(x1+x2)^2 + 0.01 x1 + 0.02 x2
    Mat Q(2, 2);
    Q << 0.202, 0.198, 0.198, 0.202;
    Vec b(2);
    b << 0.01, 0.02;
    auto f = make_quadratic(Q, b, 0.0, "quadratic2d");
    f.domain = Box::cube(2, 5.0);
    return f;
}

Objective quartic_2d(const Vec& anchor) {
    if (anchor.size() != 2) throw std::invalid_argument("quartic_2d: anchor must be 2-dimensional");
    auto eval = [](const Vec& x) { return 0.1 * std::pow(x(0), 4) + 0.001 * std::pow(x(1), 4); };
    const double f0 = eval(anchor);
    if (!(f0 > 0.0)) throw std::invalid_argument("quartic_2d: anchor must not be the minimizer");

    Objective f;
    f.name = "quartic2d";
    f.dim = 2;
    f.eval = eval;
    f.grad = [](const Vec& x) -> Vec {
        Vec g(2);
        g << 0.4 * std::pow(x(0), 3), 0.004 * std::pow(x(1), 3);
        return g;
    };
    // a^4 - b^4 = (a - b)(a + b)(a^2 + b^2)
    f.diff = [](const Vec& a, const Vec& b) {
        auto d4 = [](double p, double q) { return (p - q) * (p + q) * (p * p + q * q); };
        return 0.1 * d4(a(0), b(0)) + 0.001 * d4(a(1), b(1));
    };

    // Hessian diag(1.2 x1^2, 0.012 x2^2); on {f <= f0} each coordinate peaks where the other is 0
    const double r1 = std::pow(f0 / 0.1, 0.25);
    const double r2 = std::pow(f0 / 0.001, 0.25);
    f.smoothness = std::max(1.2 * r1 * r1, 0.012 * r2 * r2);
    f.strong_convexity = 0.0;
    f.convex = true;
    f.optimum = Optimum{Vec::Zero(2), 0.0};
    f.domain = {Vec{{-r1, -r2}}, Vec{{r1, r2}}};
    f.admissible = [eval, f0](const Vec& x) { return eval(x) <= f0 * (1.0 + 1e-12); };
    return f;
}

Objective quartic_2d() { return quartic_2d(Vec{{2.0, 4.0}}); }

namespace {

double sine_value(double x) { return x * x + 3.0 * std::sin(x) * std::sin(x); }
double sine_slope(double x) { return 2.0 * x + 3.0 * std::sin(2.0 * x); }

double pl_ratio(double x) {
    const double g = sine_slope(x);
    return g * g / (2.0 * sine_value(x));
}

}  // namespace

double pl_sine_constant(double half_width, double step) {
    const auto n = static_cast<long>(std::llround(2.0 * half_width / step));
    double best = std::numeric_limits<double>::infinity();
    double arg = 0.0;
    for (long i = 0; i <= n; ++i) {
        const double x = -half_width + static_cast<double>(i) * step;
        if (sine_value(x) == 0.0) continue;
        const double r = pl_ratio(x);
        if (r < best) {
            best = r;
            arg = x;
        }
    }
    // the grid may straddle the true minimiser; polish so that no sampled point beats the constant
    double a = arg - step, b = arg + step;
    if (a <= 0.0 && b >= 0.0) return best;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = pl_ratio(c), fd = pl_ratio(d);
    for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(arg)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = pl_ratio(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = pl_ratio(d);
        }
    }
    return std::min({best, fc, fd});
}

Objective pl_sine() {
    Objective f;
    f.name = "plsine";
    f.dim = 1;
    f.eval = [](const Vec& x) { return sine_value(x(0)); };
    f.grad = [](const Vec& x) -> Vec { return Vec::Constant(1, sine_slope(x(0))); };
    // sin^2 a - sin^2 b = sin(a + b) sin(a - b)
    f.diff = [](const Vec& a, const Vec& b) {
        const double p = a(0), q = b(0);
        return (p - q) * (p + q) + 3.0 * std::sin(p + q) * std::sin(p - q);
    };
    f.smoothness = 8.0;
    f.strong_convexity = 0.0;
    f.convex = false;
    f.pl_constant = pl_sine_constant();
    f.optimum = Optimum{Vec::Zero(1), 0.0};
    f.domain = Box::cube(1, 5.0);
    return f;
}

CompositeObjective make_composite(const Objective& f1, const Objective& f2) {
    if (f1.dim != f2.dim) throw std::invalid_argument("make_composite: dimension mismatch");
    CompositeObjective fc;
    fc.f1 = f1;
    fc.f2 = f2;
    fc.L1 = f1.smoothness.value_or(std::numeric_limits<double>::infinity());
    fc.mu1 = f1.strong_convexity;
    fc.mu2 = f2.strong_convexity;

    Objective& s = fc.sum;
    s.name = f1.name + "+" + f2.name;
    s.dim = f1.dim;
    s.eval = [f1, f2](const Vec& x) { return f1.eval(x) + f2.eval(x); };
    s.grad = [f1, f2](const Vec& x) -> Vec { return f1.grad(x) + f2.grad(x); };
    s.diff = [f1, f2](const Vec& a, const Vec& b) { return f1.difference(a, b) + f2.difference(a, b); };
    if (f1.smoothness && f2.smoothness) s.smoothness = *f1.smoothness + *f2.smoothness;
    s.strong_convexity = f1.strong_convexity + f2.strong_convexity;
    s.convex = f1.convex && f2.convex;
    s.domain = f1.domain;
    if (f1.admissible || f2.admissible) {
        s.admissible = [f1, f2](const Vec& x) { return f1.in_domain(x) && f2.in_domain(x); };
    }
    if (f1.quadratic && f2.quadratic) {
        const auto& q1 = *f1.quadratic;
        const auto& q2 = *f2.quadratic;
        const Objective merged = make_quadratic(q1.Q + q2.Q, q1.b + q2.b, q1.c + q2.c, s.name);
        s.optimum = merged.optimum;
        s.quadratic = merged.quadratic;
        s.x_resolution = merged.x_resolution;
        s.pl_constant = merged.pl_constant;
    }
    s.parts = std::make_shared<const CompositeParts>(CompositeParts{f1, f2});
    return fc;
}

CompositeObjective composite_2d() {
    Mat Q1 = Vec{{1.0, 0.1}}.asDiagonal();
    Mat Q2 = 0.5 * Mat::Identity(2, 2);
    return make_composite(make_quadratic(Q1, Vec::Zero(2), 0.0, "f1"),
                          make_quadratic(Q2, Vec::Zero(2), 0.0, "f2"));
}

Objective load_quadratic(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open quadratic file: " + path);
    int d = 0;
    if (!(in >> d) || d <= 0) throw std::runtime_error(path + ": bad dimension");
    Mat Q(d, d);
    Vec b(d);
    double c = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (!(in >> Q(i, j))) throw std::runtime_error(path + ": truncated Q");
    for (int i = 0; i < d; ++i)
        if (!(in >> b(i))) throw std::runtime_error(path + ": truncated b");
    if (!(in >> c)) throw std::runtime_error(path + ": missing c");
    return make_quadratic(Q, b, c, "quad:" + path);
}

Objective problem_by_key(const std::string& key) {
    if (key == "quartic2d") return quartic_2d();
    if (key == "quadratic2d") return quadratic_2d();
    if (key == "plsine") return pl_sine();
    if (key == "composite2d") return composite_2d().sum;
    if (key.rfind("quad:", 0) == 0) return load_quadratic(key.substr(5));
    throw std::invalid_argument("unknown problem: " + key);
}

}  // namespace wdg
