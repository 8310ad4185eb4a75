#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "powerlaw/errors.hpp"
#include "powerlaw/raoblackwell.hpp"
#include "powerlaw/sufficiency.hpp"

using namespace powerlaw;

namespace {

EstimatorFn first_coord() {
    return {"x1", [](const Sample& s) { return s[0]; }};
}

EstimatorFn sample_mean() {
    return {"xbar", [](const Sample& s) {
                double m = 0.0;
                for (double v : s) m += v;
                return m / s.size();
            }};
}

}  // namespace

TEST_CASE("conditioning the first coordinate yields the sample mean") {
    const int n = 5;
    const double th = 0.65;
    auto [spec, theta] = bernoulli_as_m2(th);
    DeformedJoint dj(spec, LikelihoodKind::jones(2.0), n);
    StatisticFn T = canonical_sufficient_statistic(spec);
    auto [phi, rep] = rao_blackwellize(dj, T, theta, first_coord());

    for (std::size_t i = 0; i < dj.space().size(); ++i) {
        const Sample s = dj.space().sample_at(i);
        double xbar = 0.0;
        for (double v : s) xbar += v;
        xbar /= n;
        CHECK(phi.eval(s) == doctest::Approx(xbar).epsilon(1e-12));
    }

    const double tau = th / n + (n - 1.0) / (2.0 * n);
    CHECK(rep.tau_star == doctest::Approx(tau).epsilon(1e-12));
    CHECK(rep.var_original ==
          doctest::Approx(tau * (1.0 - tau)).epsilon(1e-12));
    CHECK(rep.improvement > 0.0);
    CHECK(rep.var_rb < rep.var_original);
    CHECK_FALSE(rep.equality_flag);
}

TEST_CASE("conditioning a T-measurable estimator changes nothing") {
    auto [spec, theta] = bernoulli_as_m2(0.4);
    DeformedJoint dj(spec, LikelihoodKind::jones(2.0), 4);
    StatisticFn T = canonical_sufficient_statistic(spec);
    auto [phi, rep] = rao_blackwellize(dj, T, theta, sample_mean());
    CHECK(rep.equality_flag);
    CHECK(rep.improvement == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("theta dependence of the conditional is detected") {
    // the sum does not carry the ratio objective on two-trial counts. The
    // first coordinate alone would slip through (the deformed law is
    // exchangeable, so E*[x1 | sum] = sum/n regardless of theta); its square
    // conditions on the second power sum, which the bucket leaves free.
    auto [spec, theta] = binomial_exponential(2, 0.3);
    DeformedJoint dj(spec, LikelihoodKind::cauchy_schwarz(), 3);
    std::vector<Theta> grid = make_theta_grid({{0.0, 1.0}}, 9);
    EstimatorFn sq{"x1sq", [](const Sample& s) { return s[0] * s[0]; }};
    CHECK_THROWS_AS(rao_blackwellize(dj, stat_sum(), theta, sq, grid),
                    ThetaDependenceDetected);
}

TEST_CASE("three-term variance split closes") {
    const int n = 4;
    const double th = 0.6;
    auto [spec, theta] = bernoulli_as_m2(th);
    DeformedJoint dj(spec, LikelihoodKind::jones(2.0), n);
    StatisticFn T = canonical_sufficient_statistic(spec);
    const double tau = th / n + (n - 1.0) / (2.0 * n);
    // T-measurable, unbiased for tau*, but not the conditional mean
    EstimatorFn psi{"stretched", [tau](const Sample& s) {
                        double m = 0.0;
                        for (double v : s) m += v;
                        m /= s.size();
                        return tau + 2.0 * (m - tau);
                    }};
    CHECK(variance_decomposition_check(dj, T, theta, first_coord(), psi) <
          1e-12);
    CHECK(variance_decomposition_check(dj, T, theta, first_coord(),
                                       sample_mean()) < 1e-12);

    EstimatorFn biased{"biased", [](const Sample& s) { return s[0] + 0.3; }};
    CHECK_THROWS_AS(
        variance_decomposition_check(dj, T, theta, first_coord(), biased),
        PsiBiased);
}

TEST_CASE("variance minimizer among unbiased T-functions is unique") {
    auto [spec, theta] = bernoulli_as_m2(0.55);
    DeformedJoint dj(spec, LikelihoodKind::jones(2.0), 4);
    StatisticFn T = canonical_sufficient_statistic(spec);
    const double tau = 0.55 / 4.0 + 3.0 / 8.0;
    auto stretch = [tau](double c) {
        return EstimatorFn{"stretch" + std::to_string(c),
                           [tau, c](const Sample& s) {
                               double m = 0.0;
                               for (double v : s) m += v;
                               m /= s.size();
                               return tau + c * (m - tau);
                           }};
    };
    // all unbiased at this theta; stretching away from c = 1 inflates the
    // variance by c^2, so the conditional mean itself is the minimizer
    auto v = uniqueness_probe(dj, T, theta,
                              {stretch(1.0), stretch(1.3), stretch(1.6)});
    CHECK(v.unique);
    CHECK(v.argmin_name == "stretch1.000000");
    // a duplicate of the minimizer ties, but pointwise-equal ties are fine
    auto v2 = uniqueness_probe(dj, T, theta, {stretch(1.0), sample_mean()});
    CHECK(v2.unique);
    CHECK(v2.tie_is_pointwise_equal);
}

TEST_CASE("classical chain on the exponent shape") {
    auto [spec, theta] = bernoulli_exponential(0.35);
    auto rep = classical_rb_exponential(spec, 5, theta, first_coord());
    // classical conditional mean is the sample mean: Var = theta(1-theta)/n
    CHECK(rep.rb.var_rb ==
          doctest::Approx(0.35 * 0.65 / 5.0).epsilon(1e-10));
    CHECK(rep.rb.var_original == doctest::Approx(0.35 * 0.65).epsilon(1e-10));
    CHECK(std::abs(rep.cov_psi_fbar) < 1e-12);
}
