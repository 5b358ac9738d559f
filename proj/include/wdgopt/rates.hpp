#pragma once

#include "wdgopt/wdg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wdg {

struct RateEntry {
    std::string symbolic;           // closed form as tabulated
    std::optional<double> printed;  // the tabulated closed form evaluated at (L, mu, d)
    std::optional<double> derived;  // recomputed from the parameter triple
};

struct RateRow {
    std::string label;  // "(i)" .. "(vi)", "prox"
    std::string name;
    RateEntry gradient_flow;  // factor at h = 1/(alpha + beta)
    RateEntry accelerated;    // factor at the largest admissible accelerated step
    std::string note;
};

// optimal-step factors from a parameter triple
double gradient_flow_factor(const WdgParams& p);
double accelerated_factor(const WdgParams& p);

// basic kinds (i)-(vi), then the proximal-gradient row with (L1, mu1, mu2) = (L, mu, mu2)
std::vector<RateRow> rates_table(double L, double mu, int d, double mu2 = 0.0);
std::string format_rates_table(const std::vector<RateRow>& rows, double L, double mu, int d);

}  // namespace wdg
