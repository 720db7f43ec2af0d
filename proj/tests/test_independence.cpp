#include "doctest.h"

#include <cmath>

#include "cslearn/errors.hpp"
#include "cslearn/independence.hpp"
#include "cslearn/rng.hpp"
#include "cslearn/sampler.hpp"

using namespace cslearn;

namespace {

CategoricalDataset from_counts_2x2(int n00, int n01, int n10, int n11) {
    std::vector<Variable> vars{{"x", {"0", "1"}}, {"y", {"0", "1"}}};
    std::vector<std::uint8_t> codes;
    auto push = [&codes](int x, int y, int times) {
        for (int i = 0; i < times; ++i) {
            codes.push_back(std::uint8_t(x));
            codes.push_back(std::uint8_t(y));
        }
    };
    push(0, 0, n00);
    push(0, 1, n01);
    push(1, 0, n10);
    push(1, 1, n11);
    return CategoricalDataset(std::move(vars), std::move(codes));
}

CategoricalDataset random_binary(Rng& rng, int ncol, int nrow) {
    std::vector<Variable> vars(ncol);
    std::vector<std::uint8_t> codes(std::size_t(ncol) * nrow);
    for (int c = 0; c < ncol; ++c) vars[c] = {"v" + std::to_string(c), {"0", "1"}};
    while (true) {
        for (std::size_t i = 0; i < codes.size(); ++i) codes[i] = std::uint8_t(rng.below(2));
        bool ok = true;
        for (int c = 0; c < ncol; ++c) {
            bool varies = false;
            for (int r = 1; r < nrow; ++r) varies = varies || codes[std::size_t(r) * ncol + c] != codes[c];
            ok = ok && varies;
        }
        if (ok) return CategoricalDataset(vars, codes);
    }
}

// A -> B -> C, each child copying its parent with the given fidelity.
BayesNet chain_net(double fidelity) {
    Dag g = Dag::from_edges({"A", "B", "C"}, {{0, 1}, {1, 2}});
    std::vector<Variable> vars{{"A", {"0", "1"}}, {"B", {"0", "1"}}, {"C", {"0", "1"}}};
    std::vector<double> copy{fidelity, 1.0 - fidelity, 1.0 - fidelity, fidelity};
    std::vector<Cpt> cpts{{{}, {0.5, 0.5}}, {{0}, copy}, {{1}, copy}};
    return BayesNet(g, vars, cpts);
}

} // namespace

TEST_SUITE("independence") {

TEST_CASE("g2 statistic matches a hand-computed 2x2 table") {
    // Counts 30/10/10/30: G^2 = 2 (60 ln 1.5 + 20 ln 0.5) = 20.929926.
    auto ds = from_counts_2x2(30, 10, 10, 30);
    CITestResult res = g2_test(ds, 0, 1, {}, 0.05);
    CHECK(res.statistic == doctest::Approx(20.9299257469).epsilon(1e-9));
    CHECK(res.dof == 1);
    CHECK(res.p_value < 1e-4);
    CHECK_FALSE(res.independent);
    CHECK(res.reliable);
    CHECK_FALSE(res.audit);
}

TEST_CASE("perfectly proportional tables give a zero statistic") {
    auto ds = from_counts_2x2(40, 20, 20, 10);  // odds identical across rows
    CITestResult res = g2_test(ds, 0, 1, {}, 0.05);
    CHECK(res.statistic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(res.p_value == doctest::Approx(1.0));
    CHECK(res.independent);
}

TEST_CASE("chi-square helpers reproduce standard critical values") {
    CHECK(chi_squared_critical(0.05, 1) == doctest::Approx(3.8414588206941236).epsilon(1e-12));
    CHECK(chi_squared_critical(0.05, 2) == doctest::Approx(5.991464547107979).epsilon(1e-12));
    CHECK(chi_squared_critical(0.01, 1) == doctest::Approx(6.634896601021211).epsilon(1e-12));
    CHECK(chi_squared_upper_tail(3.8414588206941236, 1) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(chi_squared_upper_tail(0.0, 3) == 1.0);
}

TEST_CASE("marginal g2 equals 2 N times mutual information") {
    Rng rng = Rng::derive(555, 1);
    for (int trial = 0; trial < 20; ++trial) {
        auto ds = random_binary(rng, 2, 50 + int(rng.below(100)));
        double mi = mutual_information(ds, 0, 1);
        CITestResult res = g2_test(ds, 0, 1, {}, 0.05);
        CHECK(res.statistic == doctest::Approx(2.0 * ds.row_count() * mi).epsilon(1e-9));
    }
}

TEST_CASE("mutual information of a variable with its copy is its entropy") {
    auto ds = from_counts_2x2(40, 0, 0, 40);
    CHECK(mutual_information(ds, 0, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(mutual_information(ds, 1, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("conditioning on the middle of a chain separates the ends") {
    auto ds = forward_sample(chain_net(0.9), 3000, 2024);
    CITestResult marginal = g2_test(ds, 0, 2, {}, 0.05);
    CHECK_FALSE(marginal.independent);  // strong marginal dependence
    CITestResult conditional = g2_test(ds, 0, 2, {1}, 0.05);
    CHECK(conditional.independent);     // screened off by B
    CHECK(conditional.dof == 2);
}

TEST_CASE("type-I error rate sits near alpha") {
    Rng rng = Rng::derive(555, 2);
    int rejections = 0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
        auto ds = random_binary(rng, 2, 400);
        if (!g2_test(ds, 0, 1, {}, 0.05).independent) ++rejections;
    }
    double rate = rejections / double(trials);
    CHECK(rate > 0.02);
    CHECK(rate < 0.09);
}

TEST_CASE("prior shift suppresses true dependence") {
    auto ds = from_counts_2x2(30, 10, 10, 30);  // raw G^2 about 20.93
    CITestResult raw = g2_test(ds, 0, 1, {}, 0.05);
    CITestResult shifted = g2_prior_adjusted(ds, 0, 1, {}, 0.05, 18.0);
    CHECK_FALSE(raw.independent);
    CHECK(shifted.audit);
    CHECK(shifted.statistic == doctest::Approx(raw.statistic));  // raw stat preserved
    CHECK(shifted.p_value > raw.p_value);
    // 20.93 - 18 < 3.84, so the shifted test calls the pair independent.
    CHECK(shifted.independent);

    // A shift below the margin leaves the verdict alone.
    CITestResult mild = g2_prior_adjusted(ds, 0, 1, {}, 0.05, 1.0);
    CHECK_FALSE(mild.independent);
}

TEST_CASE("a huge shift floors the effective statistic at zero") {
    auto ds = from_counts_2x2(30, 10, 10, 30);
    CITestResult res = g2_prior_adjusted(ds, 0, 1, {}, 0.05, 1e6);
    CHECK(res.p_value == doctest::Approx(1.0));
    CHECK(res.independent);
}

TEST_CASE("underpowered tests refuse to claim dependence") {
    // dof = (2-1)(2-1) * 2 * 2 * 2 = 8, so 10 * dof = 80 > 50 rows.
    Rng rng = Rng::derive(555, 3);
    auto ds = random_binary(rng, 5, 50);
    CITestResult res = g2_test(ds, 0, 1, {2, 3, 4}, 0.05);
    CHECK(res.dof == 8);
    CHECK_FALSE(res.reliable);
    CHECK(res.independent);
}

TEST_CASE("argument validation") {
    Rng rng = Rng::derive(555, 4);
    auto ds = random_binary(rng, 3, 30);
    CHECK_THROWS_AS(g2_test(ds, 0, 0, {}, 0.05), Error);
    CHECK_THROWS_AS(g2_test(ds, 0, 1, {0}, 0.05), Error);
    CHECK_THROWS_AS(g2_test(ds, 0, 1, {2, 2}, 0.05), Error);
    CHECK_THROWS_AS(g2_test(ds, 0, 5, {}, 0.05), Error);
    CHECK_THROWS_AS(g2_test(ds, 0, 1, {}, 0.0), Error);
    CHECK_THROWS_AS(g2_test(ds, 0, 1, {}, 1.0), Error);
    CHECK_THROWS_AS(g2_prior_adjusted(ds, 0, 1, {}, 0.05, -1.0), Error);
    CHECK_THROWS_AS(mutual_information(ds, 1, 1), Error);
    CHECK_THROWS_AS(chi_squared_critical(0.05, 0), Error);
}

} // TEST_SUITE
