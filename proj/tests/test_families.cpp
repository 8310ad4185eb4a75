#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "powerlaw/errors.hpp"
#include "powerlaw/families.hpp"

using namespace powerlaw;

TEST_CASE("bernoulli power-law shape reproduces the pmf") {
    for (double th : {0.2, 0.5, 0.7}) {
        auto [spec, theta] = bernoulli_as_m2(th);
        CHECK(density(spec, theta, 1.0) == doctest::Approx(th).epsilon(1e-14));
        CHECK(density(spec, theta, 0.0) ==
              doctest::Approx(1.0 - th).epsilon(1e-14));
        CHECK(normalizer(spec, theta) ==
              doctest::Approx(1.0 - th).epsilon(1e-14));
    }
}

TEST_CASE("all bernoulli shapes agree") {
    for (double th : {0.3, 0.6}) {
        auto [m2, t1] = bernoulli_as_m2(th);
        auto [ex, t2] = bernoulli_exponential(th);
        auto [b2, t3] = bernoulli_as_b2(th);
        for (double x : {0.0, 1.0}) {
            const double ref = density(m2, t1, x);
            CHECK(density(ex, t2, x) == doctest::Approx(ref).epsilon(1e-12));
            CHECK(density(b2, t3, x) == doctest::Approx(ref).epsilon(1e-12));
        }
    }
}

TEST_CASE("binomial counts carry the binomial coefficient") {
    auto [spec, theta] = binomial_exponential(2, 0.3);
    CHECK(density(spec, theta, 0.0) == doctest::Approx(0.49).epsilon(1e-12));
    CHECK(density(spec, theta, 1.0) == doctest::Approx(0.42).epsilon(1e-12));
    CHECK(density(spec, theta, 2.0) == doctest::Approx(0.09).epsilon(1e-12));
}

TEST_CASE("heavy-tail location-scale density matches the textbook formula") {
    const double nu = 3.0, mu = 0.5, s2 = 2.0;
    auto [spec, theta] = student_as_m_alpha(nu, mu, s2);
    CHECK(spec.alpha == doctest::Approx((nu - 1.0) / (nu + 1.0)));
    CHECK(b_alpha(spec.alpha) == doctest::Approx(1.0 / nu).epsilon(1e-14));
    const double s = std::sqrt(s2);
    for (double x : {-2.0, 0.0, 0.5, 3.0}) {
        const double z = (x - mu) / s;
        const double ref = std::tgamma((nu + 1.0) / 2.0) /
                           (std::tgamma(nu / 2.0) * std::sqrt(nu * M_PI) * s) *
                           std::pow(1.0 + z * z / nu, -(nu + 1.0) / 2.0);
        CHECK(density(spec, theta, x) == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("densities integrate to one") {
    auto [spec, theta] = student_as_m_alpha(5.0, -0.3, 1.5);
    const double mass =
        num::integrate([&](double x) { return density(spec, theta, x); },
                       -num::kInf, num::kInf, 1e-9)
            .value;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

    auto [loc, ltheta] = student_as_b_alpha(3.0, 0.7);
    const double lmass =
        num::integrate([&](double x) { return density(loc, ltheta, x); },
                       -num::kInf, num::kInf, 1e-9)
            .value;
    CHECK(lmass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("regularity probe separates regular from non-regular instances") {
    auto [bern, btheta] = bernoulli_as_m2(0.4);
    auto rep = regularity_check(bern, {{0.2}, {0.5}, {0.8}}, {0.0, 1.0, 1.0});
    CHECK(rep.regular);

    // one parameter, two statistic functions: deliberately non-regular
    auto [loc, ltheta] = student_location_m_alpha(3.0, 0.0);
    auto lrep = regularity_check(loc, {{-0.5}, {0.0}, {0.5}, {1.0}},
                                 {-2.0, -1.0, 0.0, 1.0, 2.0});
    CHECK_FALSE(lrep.regular);
}

TEST_CASE("boundary parameters are rejected") {
    auto [spec, theta] = bernoulli_as_m2(0.5);
    CHECK_THROWS_AS(density(spec, {1.0}, 1.0), BoundaryTheta);
    CHECK_THROWS_AS(density(spec, {-0.1}, 1.0), BoundaryTheta);
}

TEST_CASE("negative base is detected, not silently powered") {
    auto [spec, theta] = bernoulli_as_m2(0.5);
    FamilySpec bad = spec;
    bad.h = [](double) { return -5.0; };
    bad.closed_form_normalizer = nullptr;
    CHECK_THROWS_AS(density(bad, theta, 1.0), NonPositiveBase);
}

TEST_CASE("json loader covers presets and custom polynomial families") {
    auto [b, bt] = family_from_json(R"({"kind":"bernoulli_m2","theta":0.3})");
    CHECK(density(b, bt, 1.0) == doctest::Approx(0.3).epsilon(1e-12));

    auto [s, st] = family_from_json(
        R"({"kind":"student_m_alpha","nu":3,"mu":0.0,"sigma2":1.0})");
    CHECK(s.alpha == doctest::Approx(0.5));

    // custom power-law shape equal to the bernoulli instance:
    // h = 1, f = x, w(t) = (2t-1)/(1-t) is not polynomial, so probe the
    // loader with a simple exponent-shape family instead: w(t) = t, f = x.
    auto [c, ct] = family_from_json(R"({
        "kind": "custom_m_alpha", "alpha": 2.0,
        "h": [1.0], "f": [[0.0, 1.0]], "w": [[0.0, 1.0]],
        "support": {"atoms": [0.0, 1.0]},
        "box": [[-0.9, 0.9]], "theta": [0.5]})");
    // base = 1 + 0.5 x on {0, 1}: masses 1/2.5 and 1.5/2.5
    CHECK(density(c, ct, 0.0) == doctest::Approx(0.4).epsilon(1e-10));
    CHECK(density(c, ct, 1.0) == doctest::Approx(0.6).epsilon(1e-10));
}

TEST_CASE("samplers are seeded and hit the right means") {
    auto [spec, theta] = bernoulli_as_m2(0.7);
    auto a = sample_family(spec, theta, 5000, 11);
    auto b = sample_family(spec, theta, 5000, 11);
    CHECK(a == b);
    double mean = 0.0;
    for (double x : a) mean += x;
    CHECK(mean / a.size() == doctest::Approx(0.7).epsilon(0.05));

    auto [st, stt] = student_as_m_alpha(9.0, 1.5, 1.0);
    auto xs = sample_family(st, stt, 8000, 3);
    double sm = 0.0;
    for (double x : xs) sm += x;
    CHECK(sm / xs.size() == doctest::Approx(1.5).epsilon(0.05));
}
