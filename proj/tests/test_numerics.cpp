#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "powerlaw/errors.hpp"
#include "powerlaw/numerics.hpp"

using namespace powerlaw;
using namespace powerlaw::num;

TEST_CASE("adaptive quadrature on finite intervals") {
    auto r = integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    r = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("infinite endpoints via the tangent substitution") {
    auto r = integrate([](double x) { return std::exp(-x * x / 2.0); }, -kInf,
                       kInf);
    CHECK(r.value == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-10));

    // heavy polynomial tail: the t-density with 3 degrees of freedom
    const double c = 2.0 / (M_PI * std::sqrt(3.0));
    r = integrate(
        [c](double x) { return c / std::pow(1.0 + x * x / 3.0, 2.0); }, -kInf,
        kInf);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tensorized box quadrature") {
    auto r = integrate_box(
        [](const std::vector<double>& x) {
            return std::exp(-x[0] * x[0] - x[1] * x[1]);
        },
        {{-kInf, kInf}, {-kInf, kInf}}, 1e-8);
    CHECK(r.value == doctest::Approx(M_PI).epsilon(1e-7));
}

TEST_CASE("finite differences with Richardson consistency") {
    auto d = fd_derivative([](double x) { return std::sin(x); }, 0.3, 1, 1e-4);
    CHECK(d.value == doctest::Approx(std::cos(0.3)).epsilon(1e-8));
    CHECK(d.consistent);

    d = fd_derivative([](double x) { return std::sin(x); }, 0.3, 2, 1e-4);
    CHECK(d.value == doctest::Approx(-std::sin(0.3)).epsilon(1e-6));
}

TEST_CASE("grid space enumerates lexicographically") {
    GridSpace g({0.0, 1.0}, 3);
    CHECK(g.size() == 8);
    CHECK(g.sample_at(0) == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(g.sample_at(1) == std::vector<double>{0.0, 0.0, 1.0});
    CHECK(g.sample_at(7) == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("oversized spaces are rejected") {
    // 10^12 states exceeds any sane cap
    CHECK_THROWS_AS(GridSpace(std::vector<double>(10, 0.0), 12), SpaceTooLarge);
}

TEST_CASE("rng streams are reproducible and independent") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    double same = 0.0, diff = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform();
        same += std::abs(x - b.uniform());
        diff += std::abs(x - c.uniform());
    }
    CHECK(same == 0.0);
    CHECK(diff > 0.1);
}

TEST_CASE("rng marginals have the right first moments") {
    RngStream r(7, 1);
    double m1 = 0.0, m2 = 0.0;
    const int N = 20000;
    for (int i = 0; i < N; ++i) {
        const double x = r.normal();
        m1 += x;
        m2 += x * x;
    }
    CHECK(std::abs(m1 / N) < 0.03);
    CHECK(m2 / N == doctest::Approx(1.0).epsilon(0.03));

    RngStream s(7, 2);
    double chi = 0.0;
    for (int i = 0; i < N; ++i) chi += s.chi_squared(5.0);
    CHECK(chi / N == doctest::Approx(5.0).epsilon(0.05));
}
