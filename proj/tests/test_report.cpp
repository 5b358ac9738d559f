#include "wdgopt/rates.hpp"
#include "wdgopt/report.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace wdg;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

const RateRow& row(const std::vector<RateRow>& rows, const std::string& label) {
    for (const auto& r : rows)
        if (r.label == label) return r;
    throw std::out_of_range(label);
}

}  // namespace

TEST_CASE("fmt17 round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.98019801980198018}) CHECK(std::stod(fmt17(v)) == v);
}

TEST_CASE("trajectory CSV round-trips exactly") {
    const Objective f = quadratic_2d();
    SchemeConfig c;
    c.scheme = Scheme::AccelStronglyConvex;
    c.iterations = 30;
    c.x0 = Vec{{2.0, 3.0}};
    const auto tr = run_scheme(f, Dg::ExplicitEuler, c);
    std::ostringstream out;
    write_trajectory_csv(out, tr);
    const auto rows = parse_csv(out.str());
    REQUIRE(rows.size() == tr.records.size() + 1);
    CHECK(rows[0] == std::vector<std::string>{"k", "f_gap", "x1", "x2"});
    for (std::size_t i = 0; i < tr.records.size(); ++i) {
        const auto& r = rows[i + 1];
        CHECK(std::stoi(r[0]) == tr.records[i].k);
        CHECK(std::stod(r[1]) == tr.records[i].f_gap);
        CHECK(std::stod(r[2]) == tr.records[i].x(0));
        CHECK(std::stod(r[3]) == tr.records[i].x(1));
    }
}

TEST_CASE("trace CSV carries bound and energy") {
    const Objective f = quadratic_2d();
    SchemeConfig c;
    c.iterations = 10;
    c.x0 = Vec{{2.0, 3.0}};
    const auto tr = run_scheme(f, Dg::Midpoint, c);
    const auto cert = certify_trace(tr, Theorem::GradientFlowStronglyConvex, f);
    const auto lyap = lyapunov_series(tr, Theorem::GradientFlowStronglyConvex, f);
    std::ostringstream out;
    write_trace_csv(out, tr, &cert, &lyap);
    const auto rows = parse_csv(out.str());
    REQUIRE(rows.size() == 12);
    CHECK(rows[0][3] == "bound");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stod(rows[i][3]) == cert.bound[i - 1]);
        CHECK(std::stod(rows[i][4]) == lyap.energy[i - 1]);
        CHECK(std::stod(rows[i][2]) <= std::stod(rows[i][3]));
    }
}

TEST_CASE("JSON summaries") {
    const Objective f = quadratic_2d();
    const auto r = check_wdg_inequality(f, Dg::Avf, wdg_params(Dg::Avf, f), 500);
    const auto j = to_json(r);
    CHECK(j["passed"].get<bool>());
    CHECK(j["samples"].get<long>() == 500);
    const auto p = to_json(Params{WdgParams{1, 2, 3}});
    CHECK(p["gamma"].get<double>() == 3.0);
}

TEST_CASE("rates table: tabulated strings") {
    const auto rows = rates_table(0.4, 0.004, 2);
    CHECK(row(rows, "(iv)").gradient_flow.symbolic == "1 − 6μ/(L+5μ)");
    CHECK(row(rows, "(v)").gradient_flow.symbolic == "1 − 8μ²/(L²+4μ²)");
    CHECK(row(rows, "(vi)").gradient_flow.symbolic == "1 − 2μ²/(4d²L²−μ²)");
    CHECK(row(rows, "(i)").accelerated.symbolic == "1 − √(μ/L)");
    CHECK(*row(rows, "(i)").gradient_flow.printed == doctest::Approx(1 - 2 * 0.004 / 0.404).epsilon(1e-14));
    CHECK(*row(rows, "(i)").accelerated.derived == doctest::Approx(0.9).epsilon(1e-14));
}

TEST_CASE("rates table: derived factors from hand-simplified triples") {
    const double L = 0.4, mu = 0.004, d = 2;
    const auto rows = rates_table(L, mu, 2);
    CHECK(*row(rows, "(ii)").gradient_flow.derived == doctest::Approx(0.0).scale(1.0));
    CHECK(*row(rows, "(iii)").gradient_flow.derived == doctest::Approx(1 - 8 * mu / (L + 7 * mu)).epsilon(1e-14));
    CHECK(*row(rows, "(iv)").gradient_flow.derived == doctest::Approx(1 - 6 * mu / (L + 5 * mu)).epsilon(1e-14));
    CHECK(*row(rows, "(v)").gradient_flow.derived ==
          doctest::Approx(1 - 8 * mu * mu / (L * L + 7 * mu * mu)).epsilon(1e-14));
    CHECK(*row(rows, "(vi)").gradient_flow.derived ==
          doctest::Approx(1 - 2 * mu * mu / (4 * d * L * L - mu * mu)).epsilon(1e-14));
    CHECK(*row(rows, "(v)").accelerated.derived ==
          doctest::Approx(1 - std::sqrt(4 * mu * mu / (L * L + 3 * mu * mu))).epsilon(1e-14));
    CHECK(*row(rows, "(vi)").accelerated.derived ==
          doctest::Approx(1 - std::sqrt(mu * mu / (4 * d * L * L - 2 * mu * mu))).epsilon(1e-14));
    CHECK_FALSE(row(rows, "(v)").note.empty());
    CHECK_FALSE(row(rows, "(vi)").note.empty());
    CHECK(row(rows, "(iii)").note.empty());
}

TEST_CASE("rates table: degenerate inputs") {
    CHECK(*row(rates_table(1, 1, 2), "(i)").gradient_flow.derived == doctest::Approx(0.0).scale(1.0));
    const auto rows = rates_table(1, 0, 2);
    CHECK_FALSE(row(rows, "(i)").gradient_flow.printed);
    CHECK(format_rates_table(rows, 1, 0, 2).find("n/a (SC required)") != std::string::npos);
    const auto prox = row(rates_table(1, 0.1, 2, 0.5), "prox");
    CHECK(*prox.gradient_flow.derived == doctest::Approx(1 - 2 * 0.6 / 2.1).epsilon(1e-14));
}
