#pragma once

#include "wdgopt/problems.hpp"

#include <functional>
#include <stdexcept>

namespace wdg {

struct SolveConfig {
    double tol = 1e-10;
    int max_iter = 200;
    double damping = 1.0;

    void validate() const;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class NonConvergence : public SolverError {
public:
    using SolverError::SolverError;
};
class SingularJacobian : public SolverError {
public:
    using SolverError::SolverError;
};
class NoBracket : public SolverError {
public:
    using SolverError::SolverError;
};

struct SolveResult {
    Vec x;
    int iterations = 0;
    double residual = 0.0;
};

struct ScalarRoot {
    double root = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

using VectorMap = std::function<Vec(const Vec&)>;
using JacobianMap = std::function<Mat(const Vec&)>;

// residual reported is ||map(x) - x||
SolveResult fixed_point(const VectorMap& map, const Vec& x0, const SolveConfig& cfg = {});
SolveResult newton(const VectorMap& residual, const Vec& x0, const SolveConfig& cfg = {},
                   const JacobianMap& jacobian = {});
ScalarRoot scalar_root(const std::function<double(double)>& g, double a, double b,
                       const SolveConfig& cfg = {});

Mat forward_difference_jacobian(const VectorMap& residual, const Vec& x, const Vec& rx);

}  // namespace wdg
