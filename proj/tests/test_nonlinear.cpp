#include "oracles.hpp"
#include "wdgopt/nonlinear.hpp"
#include "wdgopt/problems.hpp"

#include <doctest.h>

using namespace wdg;

TEST_CASE("fixed_point examples") {
    auto r = fixed_point([](const Vec& x) -> Vec { return 0.5 * x + Vec::Ones(1); }, Vec::Zero(1));
    CHECK(r.x(0) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.residual <= 1e-10);
    const Vec x0{{3.0, -4.0}};
    r = fixed_point([](const Vec& x) { return x; }, x0);
    CHECK(r.x == x0);
    CHECK(r.iterations == 0);
    // implicit Euler on x^2/2 with h = 1: x = x0 - x  ->  x0 / 2
    const Vec y0{{5.0}};
    r = fixed_point([&](const Vec& x) -> Vec { return y0 - x; }, y0, {1e-10, 200, 0.5});
    CHECK(r.x(0) == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("fixed_point reports divergence") {
    CHECK_THROWS_AS(fixed_point([](const Vec& x) -> Vec { return 3.0 * x + Vec::Ones(1); }, Vec::Zero(1)),
                    NonConvergence);
}

TEST_CASE("newton examples") {
    auto affine = [](const Vec& x) -> Vec { return x - 2.0 * Vec::Ones(1); };
    auto r = newton(affine, Vec::Zero(1), {}, [](const Vec&) -> Mat { return Mat::Identity(1, 1); });
    CHECK(r.x(0) == doctest::Approx(2.0));
    CHECK(r.iterations == 1);
    // a difference-quotient Jacobian is exact only up to rounding
    r = newton(affine, Vec::Zero(1));
    CHECK(r.x(0) == doctest::Approx(2.0));
    CHECK(r.iterations <= 2);
    r = newton([](const Vec& x) -> Vec { return x.array().cube() - 8.0; }, Vec::Constant(1, 3.0));
    CHECK(r.x(0) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(r.residual <= 1e-10);
}

TEST_CASE("newton matches a direct linear solve") {
    const Objective f = quadratic_2d();
    const Mat Q = f.quadratic->Q;
    const Vec b = f.quadratic->b;
    const Vec c{{1.0, -2.0}};
    for (double h : {0.1, 1.0, 10.0}) {
        auto res = [&](const Vec& x) -> Vec { return x + h * f.grad(x) - c; };
        const auto r = newton(res, Vec::Zero(2));
        const Vec direct = (Mat::Identity(2, 2) + h * Q).lu().solve(c - h * b);
        CHECK((r.x - direct).norm() <= 1e-9);
        CHECK(r.iterations <= 2);
        // damping keeps the map contractive when hL > 1
        const SolveConfig damped{1e-10, 2000, 2.0 / (2.0 + h * f.L())};
        const auto fp = fixed_point([&](const Vec& x) -> Vec { return c - h * f.grad(x); }, Vec::Zero(2), damped);
        CHECK((fp.x - r.x).norm() <= 1e-8);
    }
}

TEST_CASE("newton with an analytic Jacobian and a singular one") {
    auto res = [](const Vec& x) -> Vec { return Vec{{x(0) * x(0) - 4.0, x(1) - 1.0}}; };
    auto jac = [](const Vec& x) -> Mat { return Mat{{2 * x(0), 0.0}, {0.0, 1.0}}; };
    const auto r = newton(res, Vec{{3.0, 0.0}}, {}, jac);
    CHECK(r.x(0) == doctest::Approx(2.0));
    CHECK(res(r.x).norm() <= 1e-10);
    CHECK_THROWS_AS(newton([](const Vec& x) -> Vec { return Vec::Constant(1, x(0) * 0.0 + 1.0); }, Vec::Zero(1)),
                    SingularJacobian);
}

TEST_CASE("scalar_root examples") {
    CHECK(scalar_root([](double t) { return t - 1; }, 0, 2).root == doctest::Approx(1.0));
    const double ref = oracle::bisect([](double t) { return t * t * t - t - 2; }, 1, 2);
    const auto r = scalar_root([](double t) { return t * t * t - t - 2; }, 1, 2);
    CHECK(r.root == doctest::Approx(ref).epsilon(1e-10));
    CHECK(r.root == doctest::Approx(1.5214).epsilon(1e-4));
    CHECK(scalar_root([](double t) { return t; }, -1, 1).root == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("scalar_root grows a bracket or gives up") {
    const auto r = scalar_root([](double t) { return t - 10; }, 0, 1);
    CHECK(r.root == doctest::Approx(10.0));
    CHECK_THROWS_AS(scalar_root([](double t) { return t * t + 1; }, -1, 1), NoBracket);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS((SolveConfig{0.0, 10, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SolveConfig{1e-10, 0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SolveConfig{1e-10, 10, 1.5}.validate()), std::invalid_argument);
    CHECK_NOTHROW(SolveConfig{}.validate());
}

TEST_CASE("iteration cap raises") {
    CHECK_THROWS_AS(fixed_point([](const Vec& x) -> Vec { return 0.999 * x + Vec::Ones(1); }, Vec::Zero(1),
                                {1e-12, 5, 1.0}),
                    NonConvergence);
}
