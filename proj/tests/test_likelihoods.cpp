#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "powerlaw/errors.hpp"
#include "powerlaw/likelihoods.hpp"

using namespace powerlaw;

namespace {
const Sample kSample{1.0, 0.0, 1.0, 1.0};
}

TEST_CASE("log likelihood is the sum of log densities") {
    auto [spec, theta] = bernoulli_as_m2(0.6);
    const double expect = 3.0 * std::log(0.6) + std::log(0.4);
    CHECK(log_likelihood(spec, theta, kSample) ==
          doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("index-2 objective on bernoulli matches the hand formula") {
    auto [spec, theta] = bernoulli_as_m2(0.6);
    // (1/n) sum p = mean of {0.6, 0.4, 0.6, 0.6}; ||p||_2 = sqrt(t^2+(1-t)^2)
    const double mean_p = (0.6 + 0.4 + 0.6 + 0.6) / 4.0;
    const double norm = std::sqrt(0.36 + 0.16);
    CHECK(jones_likelihood(spec, theta, kSample, 2.0) ==
          doctest::Approx(std::log(mean_p) - std::log(norm)).epsilon(1e-13));
    CHECK(lp_norm(spec, theta, 2.0) == doctest::Approx(norm).epsilon(1e-13));
    CHECK(integral_p_alpha(spec, theta, 2.0) ==
          doctest::Approx(0.52).epsilon(1e-13));
}

TEST_CASE("density-power objective matches the hand formula") {
    auto [spec, theta] = bernoulli_as_m2(0.6);
    const double a = 2.0;
    double acc = 0.0;
    for (double x : kSample) {
        const double p = x > 0.5 ? 0.6 : 0.4;
        acc += (a * std::pow(p, a - 1.0) - 1.0) / (a - 1.0);
    }
    const double expect = acc / kSample.size() - 0.52;
    CHECK(basu_likelihood(spec, theta, kSample, a) ==
          doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("ratio objective on finite support matches the hand formula") {
    auto [spec, theta] = binomial_exponential(2, 0.3);
    EmpiricalPMF pn = EmpiricalPMF::from_sample({0.0, 1.0, 1.0, 2.0},
                                                spec.support.atoms);
    const double p0 = 0.49, p1 = 0.42, p2 = 0.09;
    const double num = 0.25 * p0 + 0.5 * p1 + 0.25 * p2;
    const double den = p0 * p0 + p1 * p1 + p2 * p2;
    CHECK(cauchy_schwarz_likelihood(pn, spec, theta) ==
          doctest::Approx(std::log(num / den)).epsilon(1e-13));
}

TEST_CASE("both generalized objectives collapse to the mean log likelihood") {
    auto [spec, theta] = student_as_m_alpha(9.0, 0.3, 1.2);
    const Sample xs{-0.5, 0.2, 1.7};
    const double ref = log_likelihood(spec, theta, xs) / xs.size();
    double prev_j = 0.0, prev_b = 0.0;
    for (int k = 0; k < 2; ++k) {
        const double eps = k == 0 ? 1e-3 : 1e-4;
        prev_j = std::abs(jones_likelihood(spec, theta, xs, 1.0 + eps) - ref);
        prev_b = std::abs(basu_likelihood(spec, theta, xs, 1.0 + eps) - ref);
        CHECK(prev_j < 5e-2 * eps / 1e-4);
        CHECK(prev_b < 5e-2 * eps / 1e-4);
    }
    // linear-in-eps convergence: the 1e-4 gap is ~10x below the 1e-3 gap
    CHECK(prev_j < 1e-3);
    CHECK(prev_b < 1e-3);
}

TEST_CASE("empirical pmf validation") {
    EmpiricalPMF ok{{0.0, 1.0}, {0.25, 0.75}};
    CHECK_NOTHROW(ok.validate());
    EmpiricalPMF bad{{0.0, 1.0}, {0.5, 0.6}};
    CHECK_THROWS_AS(bad.validate(), Error);
    CHECK_THROWS_AS(EmpiricalPMF::from_sample({0.0, 3.0}, {0.0, 1.0}), Error);
}

TEST_CASE("dispatcher routes every objective") {
    auto [spec, theta] = bernoulli_as_m2(0.6);
    CHECK(generalized_likelihood(LikelihoodKind::log(), spec, theta, kSample) ==
          doctest::Approx(log_likelihood(spec, theta, kSample)));
    CHECK(generalized_likelihood(LikelihoodKind::jones(2.0), spec, theta,
                                 kSample) ==
          doctest::Approx(jones_likelihood(spec, theta, kSample, 2.0)));
    CHECK(generalized_likelihood(LikelihoodKind::basu(2.0), spec, theta,
                                 kSample) ==
          doctest::Approx(basu_likelihood(spec, theta, kSample, 2.0)));
}
