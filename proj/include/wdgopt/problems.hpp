#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace wdg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using ScalarField = std::function<double(const Vec&)>;
using VectorField = std::function<Vec(const Vec&)>;
using Difference = std::function<double(const Vec&, const Vec&)>;

struct Optimum {
    Vec x;
    double value = 0.0;
};

struct Box {
    Vec lower;
    Vec upper;

    static Box cube(int dim, double half_width);
    bool contains(const Vec& x) const;
};

struct QuadraticForm {
    Mat Q;
    Vec b;
    double c = 0.0;
};

struct CompositeParts;

// f with hand-coded gradient and curvature metadata.
struct Objective {
    std::string name;
    int dim = 0;
    ScalarField eval;
    VectorField grad;
    // f(a) - f(b) without cancellation; falls back to eval(a) - eval(b)
    Difference diff;
    std::optional<double> smoothness;
    double strong_convexity = 0.0;
    bool convex = true;
    std::optional<double> pl_constant;
    std::optional<Optimum> optimum;
    Box domain;
    // sampling/trajectory restriction, e.g. a level set
    std::function<bool(const Vec&)> admissible;
    std::optional<QuadraticForm> quadratic;
    std::shared_ptr<const CompositeParts> parts;
    // distance to x* below which iterates are indistinguishable in double precision
    double x_resolution = 0.0;

    double difference(const Vec& a, const Vec& b) const;
    double gap(const Vec& x) const;
    double gap_resolution() const;
    double L() const;
    bool in_domain(const Vec& x) const;
};

struct CompositeParts {
    Objective first;
    Objective second;
};

struct CompositeObjective {
    Objective f1;
    Objective f2;
    Objective sum;
    double L1 = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
};

Objective make_quadratic(const Mat& Q, const Vec& b, double c = 0.0, std::string name = "quadratic");
Objective quadratic_2d();
Objective quartic_2d(const Vec& anchor);
Objective quartic_2d();
Objective pl_sine();

// min over a uniform grid of |f'|^2 / (2 f), refined by golden-section search near the argmin
double pl_sine_constant(double half_width = 10.0, double step = 1e-4);

CompositeObjective make_composite(const Objective& f1, const Objective& f2);
// f1 = 0.5 x^T diag(1, 0.1) x, f2 = 0.25 |x|^2
CompositeObjective composite_2d();

Objective load_quadratic(const std::string& path);
Objective problem_by_key(const std::string& key);

}  // namespace wdg
