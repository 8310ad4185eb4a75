#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "powerlaw/errors.hpp"
#include "powerlaw/sufficiency.hpp"

using namespace powerlaw;

namespace {

std::vector<Theta> bern_grid() {
    return make_theta_grid({{0.0, 1.0}}, 25);
}

}  // namespace

TEST_CASE("theta grids stay inside the open box") {
    auto g = make_theta_grid({{0.0, 1.0}}, 10);
    CHECK(g.size() == 10);
    CHECK(g.front()[0] > 0.0);
    CHECK(g.back()[0] < 1.0);
    auto g2 = make_theta_grid({{-1.0, 1.0}, {0.5, 2.0}}, 50);
    CHECK(g2.size() >= 20);
}

TEST_CASE("matched pairs share the statistic bucket") {
    auto [spec, theta] = bernoulli_as_m2(0.5);
    StatisticFn T = canonical_sufficient_statistic(spec);
    MatchedPairGenerator gen(spec, T, 5, 3);
    for (int i = 0; i < 50; ++i) {
        auto [x, y] = gen.next();
        CHECK(T.bucket(x) == T.bucket(y));
        CHECK(x != y);
    }
}

TEST_CASE("continuous matched pairs preserve both power sums") {
    auto [spec, theta] = student_as_m_alpha(9.0, 0.0, 1.0);
    StatisticFn T = canonical_sufficient_statistic(spec);
    MatchedPairGenerator gen(spec, T, 3, 5);
    for (int i = 0; i < 20; ++i) {
        auto [x, y] = gen.next();
        double sx = 0.0, sx2 = 0.0, sy = 0.0, sy2 = 0.0;
        for (double v : x) sx += v, sx2 += v * v;
        for (double v : y) sy += v, sy2 += v * v;
        CHECK(sx == doctest::Approx(sy).epsilon(1e-9));
        CHECK(sx2 == doctest::Approx(sy2).epsilon(1e-9));
    }
    CHECK_THROWS_AS(MatchedPairGenerator(spec, T, 2, 1),
                    PairGenerationFailed);
}

TEST_CASE("mean statistic is sufficient for the matched-index objective") {
    auto [spec, theta] = bernoulli_as_m2(0.5);
    StatisticFn T = canonical_sufficient_statistic(spec);
    auto v = koopman_probe(LikelihoodKind::jones(2.0), spec, T, 6, 150,
                           bern_grid());
    CHECK(v.verdict == Verdict::Sufficient);
    CHECK(v.max_spread < 1e-12);
}

TEST_CASE("mean statistic stays sufficient off the matched index") {
    // the density-power objective with the same index also factors through T
    auto [spec, theta] = bernoulli_as_b2(0.5);
    StatisticFn T = canonical_sufficient_statistic(spec);
    auto v = koopman_probe(LikelihoodKind::basu(2.0), spec, T, 5, 150,
                           bern_grid());
    CHECK(v.verdict == Verdict::Sufficient);
}

TEST_CASE("sum is not sufficient for the ratio objective on counts") {
    auto [spec, theta] = binomial_exponential(2, 0.3);
    StatisticFn T = stat_sum();
    auto v = koopman_probe(LikelihoodKind::cauchy_schwarz(), spec, T, 4, 200,
                           bern_grid());
    CHECK(v.verdict == Verdict::NotSufficient);
    REQUIRE(v.witness_pair.has_value());
    CHECK(T.bucket(v.witness_pair->first) == T.bucket(v.witness_pair->second));
}

TEST_CASE("heavy-tail pair: both power sums, rotated fibers") {
    auto [spec, theta] = student_as_m_alpha(3.0, 0.0, 1.0);
    StatisticFn T = canonical_sufficient_statistic(spec);
    std::vector<Theta> grid = make_theta_grid({{-1.5, 1.5}, {0.5, 3.0}}, 40);
    auto v = koopman_probe(LikelihoodKind::jones(spec.alpha), spec, T, 3, 60,
                           grid, 1e-8);
    CHECK(v.verdict == Verdict::Sufficient);
}

TEST_CASE("factorization witness splits the objective additively") {
    auto [spec, theta] = bernoulli_as_m2(0.5);
    StatisticFn T = canonical_sufficient_statistic(spec);
    auto w = factorization_witness(LikelihoodKind::jones(2.0), spec, T, 5,
                                   bern_grid());
    CHECK(w.max_residual < 1e-12);
    CHECK(w.probes == 100);

    auto [bin, btheta] = binomial_exponential(2, 0.3);
    CHECK_THROWS_AS(
        factorization_witness(LikelihoodKind::cauchy_schwarz(), bin,
                              stat_sum(), 4, bern_grid()),
        ResidualExceedsTol);
}

TEST_CASE("minimality: canonical statistic minimal, raw sample not") {
    auto [spec, theta] = bernoulli_as_m2(0.5);
    StatisticFn T = canonical_sufficient_statistic(spec);
    auto v = minimality_probe(LikelihoodKind::jones(2.0), spec, T, 5, 300,
                              bern_grid());
    CHECK(v.verdict == Verdict::Minimal);

    // the identity statistic refines T: permuted samples witness coarseness
    auto vi = minimality_probe(LikelihoodKind::jones(2.0), spec,
                               stat_identity(5), 5, 2000, bern_grid());
    CHECK(vi.verdict == Verdict::NotMinimal);
}
