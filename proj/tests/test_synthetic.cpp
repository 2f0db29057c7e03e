#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "creditlab/discriminant.hpp"
#include "creditlab/synthetic.hpp"
#include "helpers.hpp"

using namespace creditlab;

TEST_CASE("generate_synthetic is deterministic per seed") {
    const auto spec = planted_spec(20, 30, 4, 2.0, 1, 77);
    const auto a = generate_synthetic(spec);
    const auto b = generate_synthetic(spec);
    REQUIRE(a.records.size() == 50);
    CHECK(a.count_label(0) == 20);
    CHECK(a.count_label(1) == 30);
    CHECK(a.variable_names == std::vector<std::string>{"R01", "R02", "R03", "R04"});
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].firm_id == b.records[i].firm_id);
        CHECK(a.records[i].values == b.records[i].values);
    }
    const auto c = generate_synthetic(planted_spec(20, 30, 4, 2.0, 1, 78));
    CHECK(a.records[0].values != c.records[0].values);
}

TEST_CASE("generate_synthetic validates the covariance") {
    auto spec = planted_spec(5, 5, 2, 1.0, 0, 1);
    SECTION("negative definite") {
        spec.covariance = {{-1.0, 0.0}, {0.0, 1.0}};
        CHECK_THROWS_AS(generate_synthetic(spec), NotPositiveDefinite);
    }
    SECTION("asymmetric") {
        spec.covariance = {{1.0, 0.5}, {-0.5, 1.0}};
        CHECK_THROWS_AS(generate_synthetic(spec), NotPositiveDefinite);
    }
    SECTION("a correlated SPD covariance is accepted and shapes the sample") {
        spec.covariance = {{2.0, 0.9}, {0.9, 1.0}};
        spec.n0 = spec.n1 = 2000;
        const auto ds = generate_synthetic(spec);
        double sxy = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
        for (const auto& r : ds.records) {
            if (r.label != 0) continue;
            sx += r.values[0];
            sy += r.values[1];
            sxx += r.values[0] * r.values[0];
            syy += r.values[1] * r.values[1];
            sxy += r.values[0] * r.values[1];
        }
        const double n = 2000.0;
        const double cov = sxy / n - (sx / n) * (sy / n);
        const double vx = sxx / n - (sx / n) * (sx / n);
        CHECK(std::fabs(cov - 0.9) < 0.15);
        CHECK(std::fabs(vx - 2.0) < 0.25);
    }
}

TEST_CASE("6-SD separation in 1-D trains a near-perfect LDA") {
    const auto ds = generate_synthetic(planted_spec(100, 100, 1, 6.0, 0, 5));
    const auto model = fit_lda(ds, ds.variable_names);
    const auto table = classification_table(model, ds);
    CHECK(table.overall_rate() >= 0.99);
}

TEST_CASE("no signal means accuracy near the larger prior") {
    // identical means: any classifier can do no better than guessing the
    // majority class, up to sampling noise
    auto spec = planted_spec(250, 250, 3, 0.0, 0, 6);
    const auto ds = generate_synthetic(spec);
    const auto model = fit_lda(ds, ds.variable_names);
    const auto table = classification_table(model, ds);
    CHECK(std::fabs(table.overall_rate() - 0.5) < 0.10);
}

TEST_CASE("assign_years_cyclic spreads each class evenly") {
    auto ds = generate_synthetic(planted_spec(26 * 3, 60 * 3, 2, 1.0, 0, 9));
    assign_years_cyclic(ds, {2005, 2006, 2007});
    long counts[2][3] = {};
    for (const auto& r : ds.records) counts[r.label][r.year - 2005]++;
    for (int y = 0; y < 3; ++y) {
        CHECK(counts[0][y] == 26);
        CHECK(counts[1][y] == 60);
    }
}
