#pragma once

#include "wdgopt/problems.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wdg {

enum class Dg { ExplicitEuler, ImplicitEuler, Midpoint, Avf, Gonzalez, ItohAbe };

inline constexpr int kAvfDefaultNodes = 8;

// One of the six basic weak discrete gradients, or the sum of two of them
// applied to the two parts of a composite objective.
class WdgKind {
public:
    WdgKind(Dg basic) : first_(basic) {}  // NOLINT(google-explicit-constructor)
    static WdgKind sum(Dg first, Dg second);

    bool is_sum() const { return second_.has_value(); }
    Dg first() const { return first_; }
    Dg second() const;

    std::string key() const;
    // true when the value does not depend on its first argument y
    bool explicit_in_y() const;
    bool strict() const;

    friend bool operator==(const WdgKind&, const WdgKind&) = default;

private:
    Dg first_;
    std::optional<Dg> second_;
};

WdgKind parse_wdg_kind(std::string_view key);
std::string dg_key(Dg kind);
std::string dg_label(Dg kind);  // "(i)" .. "(vi)"
const std::vector<Dg>& all_dgs();

struct WdgParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

struct PlWdgParams {
    double alpha = 0.0;
    double beta = 0.0;
};

Vec eval_wdg(Dg kind, const Objective& f, const Vec& y, const Vec& z);
Vec eval_wdg(const WdgKind& kind, const Objective& f, const Vec& y, const Vec& z);

// L may be +inf when unknown; kinds that need it reject that
WdgParams wdg_params(Dg kind, double L, double mu, int d);
WdgParams wdg_params(const WdgKind& kind, const Objective& f);
PlWdgParams pl_wdg_params(const WdgKind& kind, double L, int d);

struct GaussLegendre {
    std::vector<double> nodes;    // on [0, 1]
    std::vector<double> weights;  // sum to 1
};
GaussLegendre gauss_legendre(int n);

Vec avf_quadrature(const Objective& f, const Vec& y, const Vec& z, int nodes = kAvfDefaultNodes);

}  // namespace wdg
