#include "wdgopt/rates.hpp"

#include "wdgopt/report.hpp"

#include <cmath>
#include <sstream>

namespace wdg {

double gradient_flow_factor(const WdgParams& p) {
    return 1.0 - 2.0 * (p.beta + p.gamma) / (p.alpha + p.beta + 2.0 * p.gamma);
}

double accelerated_factor(const WdgParams& p) { return 1.0 - std::sqrt((p.beta + p.gamma) / (p.alpha + p.gamma)); }

namespace {

struct Closed {
    const char* gf;
    const char* acc;
    double (*gf_value)(double L, double mu, double d);
    double (*acc_value)(double L, double mu, double d);
};

// the tabulated forms, kept verbatim
const Closed kTable[] = {
    {"1 − 2μ/(L+μ)", "1 − √(μ/L)", [](double L, double m, double) { return 1 - 2 * m / (L + m); },
     [](double L, double m, double) { return 1 - std::sqrt(m / L); }},
    {"0", "0", [](double, double, double) { return 0.0; }, [](double, double, double) { return 0.0; }},
    {"1 − 8μ/(L+7μ)", "1 − √(4μ/(L+3μ))", [](double L, double m, double) { return 1 - 8 * m / (L + 7 * m); },
     [](double L, double m, double) { return 1 - std::sqrt(4 * m / (L + 3 * m)); }},
    {"1 − 6μ/(L+5μ)", "1 − √(3μ/(L+2μ))", [](double L, double m, double) { return 1 - 6 * m / (L + 5 * m); },
     [](double L, double m, double) { return 1 - std::sqrt(3 * m / (L + 2 * m)); }},
    {"1 − 8μ²/(L²+4μ²)", "1 − √(4μ²/(L²+3μ²))",
     [](double L, double m, double) { return 1 - 8 * m * m / (L * L + 4 * m * m); },
     [](double L, double m, double) { return 1 - std::sqrt(4 * m * m / (L * L + 3 * m * m)); }},
    {"1 − 2μ²/(4d²L²−μ²)", "1 − √(μ²/(4dL²−2μ²))",
     [](double L, double m, double d) { return 1 - 2 * m * m / (4 * d * d * L * L - m * m); },
     [](double L, double m, double d) { return 1 - std::sqrt(m * m / (4 * d * L * L - 2 * m * m)); }},
};

const char* kNames[] = {"explicit Euler", "implicit Euler", "midpoint", "AVF", "Gonzalez", "Itoh-Abe"};

std::string show(const std::optional<double>& v) { return v ? fmt17(*v) : "n/a (SC required)"; }

}  // namespace

std::vector<RateRow> rates_table(double L, double mu, int d, double mu2) {
    std::vector<RateRow> rows;
    for (Dg k : all_dgs()) {
        const auto i = static_cast<int>(k);
        RateRow row;
        row.label = dg_label(k);
        row.name = kNames[i];
        row.gradient_flow.symbolic = kTable[i].gf;
        row.accelerated.symbolic = kTable[i].acc;
        if (mu > 0.0) {
            const auto p = wdg_params(k, L, mu, d);
            row.gradient_flow.printed = kTable[i].gf_value(L, mu, d);
            row.accelerated.printed = kTable[i].acc_value(L, mu, d);
            row.gradient_flow.derived = gradient_flow_factor(p);
            row.accelerated.derived = accelerated_factor(p);
            const double tol = 1e-12;
            if (std::abs(*row.gradient_flow.printed - *row.gradient_flow.derived) > tol ||
                std::abs(*row.accelerated.printed - *row.accelerated.derived) > tol)
                row.note = "tabulated form disagrees with the parameter triple";
        }
        rows.push_back(std::move(row));
    }

    RateRow prox;
    prox.label = "prox";
    prox.name = "proximal gradient (L1=L, mu1=mu, mu2)";
    prox.gradient_flow.symbolic = "1 − 2(μ1+μ2)/(L1+μ1+2μ2)";
    prox.accelerated.symbolic = "1 − √((μ1+μ2)/(L1+μ2))";
    if (mu + mu2 > 0.0) {
        const WdgParams p{L / 2, mu / 2, mu2 / 2};
        prox.gradient_flow.printed = 1 - 2 * (mu + mu2) / (L + mu + 2 * mu2);
        prox.accelerated.printed = 1 - std::sqrt((mu + mu2) / (L + mu2));
        prox.gradient_flow.derived = gradient_flow_factor(p);
        prox.accelerated.derived = accelerated_factor(p);
    }
    rows.push_back(std::move(prox));
    return rows;
}

std::string format_rates_table(const std::vector<RateRow>& rows, double L, double mu, int d) {
    std::ostringstream out;
    out << "L = " << fmt17(L) << ", mu = " << fmt17(mu) << ", d = " << d << "\n";
    out << "kind | gradient flow: closed form | tabulated | from params | accelerated: closed form | tabulated | "
           "from params\n";
    for (const auto& r : rows) {
        out << r.label << ' ' << r.name << " | " << r.gradient_flow.symbolic << " | " << show(r.gradient_flow.printed)
            << " | " << show(r.gradient_flow.derived) << " | " << r.accelerated.symbolic << " | "
            << show(r.accelerated.printed) << " | " << show(r.accelerated.derived);
        if (!r.note.empty()) out << "  [" << r.note << "]";
        out << '\n';
    }
    return out.str();
}

}  // namespace wdg
