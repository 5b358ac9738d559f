#include "oracles.hpp"
#include "wdgopt/wdg.hpp"

#include <doctest.h>

#include <random>

using namespace wdg;

namespace {

Vec random_vec(int d, std::mt19937_64& rng, double r = 3.0) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x(i) = std::uniform_real_distribution<double>(-r, r)(rng);
    return x;
}

Objective half_norm() { return make_quadratic(Mat::Identity(2, 2), Vec::Zero(2)); }

}  // namespace

TEST_CASE("diagonal consistency") {
    for (const Objective& f : {quadratic_2d(), quartic_2d(), pl_sine()}) {
        std::mt19937_64 rng(1);
        for (Dg k : all_dgs()) {
            CAPTURE(f.name);
            CAPTURE(dg_key(k));
            double worst = 0.0;
            for (int i = 0; i < 1000; ++i) {
                const Vec x = random_vec(f.dim, rng);
                const Vec g = f.grad(x);
                worst = std::max(worst, (eval_wdg(k, f, x, x) - g).norm() / (1 + g.norm()));
            }
            CHECK(worst <= 1e-9);
        }
    }
}

TEST_CASE("Gonzalez, AVF and midpoint coincide on quadratics") {
    const Objective f = quadratic_2d();
    const Mat Q = f.quadratic->Q;
    const Vec b = f.quadratic->b;
    std::mt19937_64 rng(2);
    for (int i = 0; i < 500; ++i) {
        const Vec y = random_vec(2, rng), z = random_vec(2, rng);
        const Vec expected = Q * (0.5 * (y + z)) + b;
        for (Dg k : {Dg::Gonzalez, Dg::Avf, Dg::Midpoint})
            CHECK((eval_wdg(k, f, y, z) - expected).norm() <= 1e-12 * (1 + expected.norm()));
    }
}

TEST_CASE("Itoh-Abe hand example") {
    const Vec g = eval_wdg(Dg::ItohAbe, half_norm(), Vec{{1.0, 1.0}}, Vec::Zero(2));
    CHECK(g(0) == doctest::Approx(0.5));
    CHECK(g(1) == doctest::Approx(0.5));
}

TEST_CASE("Itoh-Abe telescopes on quadratic_2d") {
    const Objective f = quadratic_2d();
    const Vec y{{1.0, -2.0}}, x{{0.5, 3.0}};
    // divided differences along the sweep (x1,x2) -> (y1,x2) -> (y1,y2)
    const Vec mid{{y(0), x(1)}};
    const double g1 = (f.eval(mid) - f.eval(x)) / (y(0) - x(0));
    const double g2 = (f.eval(y) - f.eval(mid)) / (y(1) - x(1));
    const Vec g = eval_wdg(Dg::ItohAbe, f, y, x);
    CHECK(g(0) == doctest::Approx(g1).epsilon(1e-12));
    CHECK(g(1) == doctest::Approx(g2).epsilon(1e-12));
    CHECK(g.dot(y - x) == doctest::Approx(f.eval(y) - f.eval(x)).epsilon(1e-12));
}

TEST_CASE("Itoh-Abe handles a coincident coordinate") {
    const Objective f = quartic_2d();
    const Vec y{{1.0, 2.0}}, z{{1.0, -1.0}};
    const Vec g = eval_wdg(Dg::ItohAbe, f, y, z);
    CHECK(std::isfinite(g(0)));
    CHECK(g(0) == doctest::Approx(f.grad(Vec{{1.0, -1.0}})(0)));
    CHECK(g.dot(y - z) == doctest::Approx(f.eval(y) - f.eval(z)).epsilon(1e-12));
}

TEST_CASE("AVF matches a Simpson reference") {
    const Objective f = quartic_2d();
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const Vec y = random_vec(2, rng), z = random_vec(2, rng);
        const Vec ref = oracle::segment_average(f.grad, y, z);
        // integrand is cubic in the segment parameter: two Gauss nodes are exact
        CHECK((avf_quadrature(f, y, z, 2) - ref).norm() <= 1e-12 * (1 + ref.norm()));
        CHECK((eval_wdg(Dg::Avf, f, y, z) - ref).norm() <= 1e-12 * (1 + ref.norm()));
    }
    const Objective q = quadratic_2d();
    const Vec y{{1.0, 2.0}}, z{{-3.0, 0.5}};
    const Vec exact = q.quadratic->Q * (0.5 * (y + z)) + q.quadratic->b;
    for (int n : {1, 2, 5, 8}) CHECK((avf_quadrature(q, y, z, n) - exact).norm() <= 1e-14);
    CHECK((avf_quadrature(f, z, z) - f.grad(z)).norm() <= 1e-14);
}

TEST_CASE("AVF on a non-polynomial integrand") {
    const Objective f = pl_sine();
    const Vec y{{2.7}}, z{{-1.3}};
    // f(y) - f(z) = <avf, y - z> exactly for d = 1
    const double expect = (f.eval(y) - f.eval(z)) / (y(0) - z(0));
    CHECK(eval_wdg(Dg::Avf, f, y, z)(0) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("gauss_legendre rule") {
    for (int n : {1, 2, 3, 8, 17}) {
        const auto r = gauss_legendre(n);
        double s = 0;
        for (double w : r.weights) s += w;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
        // exact for t^(2n-1)
        double m = 0;
        for (int j = 0; j < n; ++j) m += r.weights[j] * std::pow(r.nodes[j], 2 * n - 1);
        CHECK(m == doctest::Approx(1.0 / (2 * n)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("parameter triples") {
    const double L = 0.4, mu = 0.004;
    auto same = [](WdgParams p, double a, double b, double c) {
        CHECK(p.alpha == doctest::Approx(a).epsilon(1e-15));
        CHECK(p.beta == doctest::Approx(b).epsilon(1e-15));
        CHECK(p.gamma == doctest::Approx(c).epsilon(1e-15));
    };
    same(wdg_params(Dg::ExplicitEuler, L, mu, 2), L / 2, mu / 2, 0);
    same(wdg_params(Dg::ImplicitEuler, L, mu, 2), 0, 0, mu / 2);
    same(wdg_params(Dg::Midpoint, L, mu, 2), L / 8 + mu / 8, mu / 4, mu / 4);
    same(wdg_params(Dg::Avf, L, mu, 2), L / 6 + mu / 12, mu / 4, mu / 4);
    same(wdg_params(Dg::Gonzalez, L, mu, 2), (L + mu) / 8 + (L - mu) * (L - mu) / (16 * mu), mu / 4, 0);
    same(wdg_params(Dg::ItohAbe, L, mu, 3), 3 * L * L / mu - mu / 4, mu / 2, -mu / 4);
    same(wdg_params(Dg::ImplicitEuler, INFINITY, 0.0, 2), 0, 0, 0);
    CHECK_THROWS_AS(wdg_params(Dg::Gonzalez, L, 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(wdg_params(Dg::ExplicitEuler, INFINITY, mu, 2), std::invalid_argument);
}

TEST_CASE("PL parameter pairs") {
    const double L = 8;
    auto pair = [](PlWdgParams p, double a, double b) {
        CHECK(p.alpha == doctest::Approx(a));
        CHECK(p.beta == doctest::Approx(b));
    };
    pair(pl_wdg_params(Dg::ExplicitEuler, L, 1), L / 2, 0);
    pair(pl_wdg_params(Dg::ImplicitEuler, L, 1), L / 2, L);
    pair(pl_wdg_params(Dg::Midpoint, L, 1), L / 8, L / 2);
    pair(pl_wdg_params(Dg::Avf, L, 1), 0, L / 2);
    pair(pl_wdg_params(Dg::Gonzalez, L, 1), 0, 5 * L / 8);
    pair(pl_wdg_params(Dg::ItohAbe, L, 4), 0, 2 * L);
    CHECK_THROWS_AS(pl_wdg_params(WdgKind::sum(Dg::ExplicitEuler, Dg::ImplicitEuler), L, 1), std::invalid_argument);
}

TEST_CASE("sum rule") {
    const auto c = composite_2d();
    const auto k = WdgKind::sum(Dg::ExplicitEuler, Dg::ImplicitEuler);
    const auto p = wdg_params(k, c.sum);
    const auto a = wdg_params(Dg::ExplicitEuler, c.L1, c.mu1, 2);
    const auto b = wdg_params(Dg::ImplicitEuler, INFINITY, c.mu2, 2);
    CHECK(p.alpha == doctest::Approx(a.alpha + b.alpha));
    CHECK(p.beta == doctest::Approx(a.beta + b.beta));
    CHECK(p.gamma == doctest::Approx(a.gamma + b.gamma));
    const Vec y{{1.0, -0.5}}, z{{0.3, 2.0}};
    const Vec expected = c.f1.grad(z) + c.f2.grad(y);
    CHECK((eval_wdg(k, c.sum, y, z) - expected).norm() <= 1e-15);
    CHECK_THROWS_AS(eval_wdg(k, quadratic_2d(), y, z), std::invalid_argument);
}

TEST_CASE("kind keys") {
    for (Dg k : all_dgs()) CHECK(parse_wdg_kind(dg_key(k)) == WdgKind(k));
    const auto s = parse_wdg_kind("sum:ee+ie");
    CHECK(s.is_sum());
    CHECK(s.key() == "sum:ee+ie");
    CHECK(dg_label(Dg::Gonzalez) == "(v)");
    CHECK_THROWS_AS(parse_wdg_kind("rk4"), std::invalid_argument);
    CHECK_THROWS_AS(parse_wdg_kind("sum:ee"), std::invalid_argument);
    CHECK(WdgKind(Dg::ExplicitEuler).explicit_in_y());
    CHECK_FALSE(WdgKind(Dg::Midpoint).explicit_in_y());
    CHECK(WdgKind(Dg::Avf).strict());
    CHECK_FALSE(WdgKind(Dg::Midpoint).strict());
}
