#include "wdgopt/nonlinear.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <string>

namespace wdg {

void SolveConfig::validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("solver tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("solver max_iter must be at least 1");
    if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("solver damping must lie in (0, 1]");
}

SolveResult fixed_point(const VectorMap& map, const Vec& x0, const SolveConfig& cfg) {
    cfg.validate();
    Vec x = x0;
    double first = -1.0;
    for (int it = 0;; ++it) {
        const Vec step = map(x) - x;
        const double r = step.norm();
        if (!std::isfinite(r)) throw NonConvergence("fixed_point: non-finite iterate");
        if (r <= cfg.tol) return {x, it, r};
        if (first < 0.0) first = r;
        // a map this far from contracting will not come back
        if (r > 1e8 * first) throw NonConvergence("fixed_point: diverging");
        if (it == cfg.max_iter)
            throw NonConvergence("fixed_point: no convergence in " + std::to_string(cfg.max_iter) + " iterations");
        x += cfg.damping * step;
    }
}

Mat forward_difference_jacobian(const VectorMap& residual, const Vec& x, const Vec& rx) {
    const auto n = x.size();
    Mat J(rx.size(), n);
    Vec xp = x;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double h = 1e-7 * (1.0 + std::abs(x(j)));
        xp(j) = x(j) + h;
        J.col(j) = (residual(xp) - rx) / (xp(j) - x(j));
        xp(j) = x(j);
    }
    return J;
}

SolveResult newton(const VectorMap& residual, const Vec& x0, const SolveConfig& cfg, const JacobianMap& jacobian) {
    cfg.validate();
    Vec x = x0;
    for (int it = 0;; ++it) {
        const Vec r = residual(x);
        const double rn = r.norm();
        if (!std::isfinite(rn)) throw NonConvergence("newton: non-finite residual");
        if (rn <= cfg.tol) return {x, it, rn};
        if (it == cfg.max_iter)
            throw NonConvergence("newton: no convergence in " + std::to_string(cfg.max_iter) + " iterations");
        const Mat J = jacobian ? jacobian(x) : forward_difference_jacobian(residual, x, r);
        Eigen::FullPivLU<Mat> lu(J);
        if (!lu.isInvertible()) throw SingularJacobian("newton: singular Jacobian");
        x -= cfg.damping * lu.solve(r);
    }
}

ScalarRoot scalar_root(const std::function<double(double)>& g, double a, double b, const SolveConfig& cfg) {
    cfg.validate();
    if (a > b) std::swap(a, b);
    double fa = g(a), fb = g(b);
    if (std::abs(fa) <= cfg.tol) return {a, 0, std::abs(fa)};
    if (std::abs(fb) <= cfg.tol) return {b, 0, std::abs(fb)};
    for (int grow = 0; fa * fb > 0.0; ++grow) {
        if (grow == 50 || !std::isfinite(fa) || !std::isfinite(fb))
            throw NoBracket("scalar_root: no sign change found");
        // push out the end that looks closer to a root
        if (std::abs(fa) < std::abs(fb)) {
            a -= b - a;
            fa = g(a);
        } else {
            b += b - a;
            fb = g(b);
        }
    }

    double width = b - a;
    for (int it = 1; it <= cfg.max_iter; ++it) {
        double c = b - fb * (b - a) / (fb - fa);
        if (!(c > a && c < b) || (it % 3 == 0 && b - a > 0.5 * width)) c = 0.5 * (a + b);
        if (it % 3 == 0) width = b - a;
        const double fc = g(c);
        if (std::abs(fc) <= cfg.tol) return {c, it, std::abs(fc)};
        if ((fc < 0.0) == (fa < 0.0)) {
            a = c;
            fa = fc;
        } else {
            b = c;
            fb = fc;
        }
        if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)))
            throw NonConvergence("scalar_root: bracket collapsed above tolerance");
    }
    throw NonConvergence("scalar_root: no convergence in " + std::to_string(cfg.max_iter) + " iterations");
}

}  // namespace wdg
