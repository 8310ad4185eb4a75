#include "powerlaw/numerics.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "powerlaw/errors.hpp"

namespace powerlaw::num {

namespace {

struct SimpsonState {
    const std::function<double(double)>* f;
    int subdivisions = 0;
    int max_subdivisions = 0;
    bool budget_hit = false;
};

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(SimpsonState& st, double a, double b, double fa, double fm,
                double fb, double whole, double tol, int depth,
                double& err_acc) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = (*st.f)(lm), frm = (*st.f)(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double delta = left + right - whole;
    ++st.subdivisions;
    if (depth <= 0 || st.subdivisions > st.max_subdivisions) {
        st.budget_hit = true;
        err_acc += std::abs(delta);
        return left + right + delta / 15.0;
    }
    if (std::abs(delta) <= 15.0 * tol) {
        err_acc += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return adaptive(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1,
                    err_acc) +
           adaptive(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1,
                    err_acc);
}

QuadratureResult integrate_finite(const std::function<double(double)>& f,
                                  double a, double b, double rel_tol,
                                  int max_subdivisions) {
    SimpsonState st{&f, 0, max_subdivisions, false};
    // Seed the absolute tolerance from a coarse scan so rel_tol means
    // "relative to the integral's magnitude", with a floor for zero results.
    double scale = 0.0;
    const int kScan = 32;
    for (int i = 0; i <= kScan; ++i) {
        const double x = a + (b - a) * i / kScan;
        scale += std::abs(f(x));
    }
    scale = scale / (kScan + 1) * std::abs(b - a);
    const double tol = rel_tol * std::max(scale, 1e-300);

    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = simpson(fa, fm, fb, a, b);
    double err = 0.0;
    const double value =
        adaptive(st, a, m, fa, f(0.5 * (a + m)), fm, simpson(fa, f(0.5 * (a + m)), fm, a, m),
                 0.5 * tol, 48, err) +
        adaptive(st, m, b, fm, f(0.5 * (m + b)), fb, simpson(fm, f(0.5 * (m + b)), fb, m, b),
                 0.5 * tol, 48, err);
    (void)whole;
    QuadratureResult r;
    r.value = value;
    r.error_estimate = err;
    r.subdivisions = st.subdivisions;
    r.converged = !st.budget_hit;
    return r;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double rel_tol, int max_subdivisions) {
    const bool lo_inf = std::isinf(a), hi_inf = std::isinf(b);
    if (!lo_inf && !hi_inf) {
        return integrate_finite(f, a, b, rel_tol, max_subdivisions);
    }
    // x = tan(u) maps (-pi/2, pi/2) onto the real line; clip u slightly
    // inside the poles and map the finite endpoint through atan.
    const double kEdge = 1e-9;
    const double ua = lo_inf ? -M_PI_2 + kEdge : std::atan(a);
    const double ub = hi_inf ? M_PI_2 - kEdge : std::atan(b);
    auto g = [&f](double u) {
        const double c = std::cos(u);
        const double x = std::tan(u);
        const double v = f(x) / (c * c);
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate_finite(g, ua, ub, rel_tol, max_subdivisions);
}

QuadratureResult integrate_box(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<std::pair<double, double>>& box, double rel_tol,
    int max_subdivisions) {
    const std::size_t d = box.size();
    if (d == 0 || d > 3) throw Error("integrate_box: dimension must be 1..3");
    if (d == 1) {
        auto f1 = [&f](double x) { return f({x}); };
        return integrate(f1, box[0].first, box[0].second, rel_tol,
                         max_subdivisions);
    }
    // Outer adaptive pass integrates the inner (d-1)-dim integral; inner
    // tolerances are tightened so outer noise dominates the budget.
    std::vector<std::pair<double, double>> inner(box.begin() + 1, box.end());
    int total_sub = 0;
    bool all_conv = true;
    auto f_outer = [&](double x0) {
        auto f_in = [&f, x0](const std::vector<double>& rest) {
            std::vector<double> full;
            full.reserve(rest.size() + 1);
            full.push_back(x0);
            full.insert(full.end(), rest.begin(), rest.end());
            return f(full);
        };
        QuadratureResult r =
            integrate_box(f_in, inner, rel_tol * 0.1, max_subdivisions);
        total_sub += r.subdivisions;
        all_conv = all_conv && r.converged;
        return r.value;
    };
    QuadratureResult r = integrate(f_outer, box[0].first, box[0].second,
                                   rel_tol, max_subdivisions);
    r.subdivisions += total_sub;
    r.converged = r.converged && all_conv;
    return r;
}

FdResult fd_derivative(const std::function<double(double)>& g, double x,
                       int order, double h, bool strict) {
    auto stencil = [&](double step) {
        if (order == 1) return (g(x + step) - g(x - step)) / (2.0 * step);
        return (g(x + step) - 2.0 * g(x) + g(x - step)) / (step * step);
    };
    const double d_h = stencil(h);
    const double d_h2 = stencil(h / 2.0);
    const double d_h4 = stencil(h / 4.0);
    FdResult r;
    // Richardson: Richardson-extrapolated value plus the ratio of successive
    // corrections, which should sit near 4 for an O(h^2) stencil.
    r.value = (4.0 * d_h4 - d_h2) / 3.0;
    const double c1 = d_h - d_h2;
    const double c2 = d_h2 - d_h4;
    if (std::abs(c2) > 1e-14 * (std::abs(d_h) + 1.0)) {
        r.richardson_ratio = c1 / c2;
        r.consistent = r.richardson_ratio > 2.0 && r.richardson_ratio < 8.0;
    } else {
        // corrections already at float noise: accept
        r.richardson_ratio = 4.0;
        r.consistent = true;
    }
    if (strict && !r.consistent) {
        throw NoisyFunction("fd_derivative: Richardson ratios inconsistent");
    }
    return r;
}

GridSpace::GridSpace(std::vector<double> points_per_coordinate, int n)
    : points_(std::move(points_per_coordinate)), n_(n) {
    if (points_.empty() || n <= 0) throw Error("GridSpace: empty space");
    double sz = 1.0;
    for (int i = 0; i < n; ++i) sz *= static_cast<double>(points_.size());
    if (sz > static_cast<double>(max_space())) {
        throw SpaceTooLarge("enumeration space of " + std::to_string(sz) +
                            " states exceeds cap " +
                            std::to_string(max_space()) +
                            " (set POWERLAW_SUFF_MAX_SPACE to raise)");
    }
    size_ = static_cast<std::size_t>(sz);
}

std::vector<double> GridSpace::sample_at(std::size_t index) const {
    std::vector<double> out(n_);
    const std::size_t base = points_.size();
    for (int i = n_ - 1; i >= 0; --i) {
        out[i] = points_[index % base];
        index /= base;
    }
    return out;
}

std::size_t GridSpace::max_space() {
    if (const char* env = std::getenv("POWERLAW_SUFF_MAX_SPACE")) {
        const long long v = std::atoll(env);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 4'000'000;
}

// SplitMix64 keyed by (seed, tag, index); simple, fast and portable.
RngStream::RngStream(std::uint64_t seed, std::uint64_t tag,
                     std::uint64_t index) {
    state_ = seed * 0x9E3779B97F4A7C15ULL ^ (tag + 0xBF58476D1CE4E5B9ULL) *
                                                0x94D049BB133111EBULL;
    state_ ^= index + 0x2545F4914F6CDD1DULL;
    for (int i = 0; i < 4; ++i) next_raw();
}

std::uint64_t RngStream::next_raw() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double RngStream::uniform() {
    return static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) {
    return a + (b - a) * uniform();
}

double RngStream::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_normal_ = r * std::sin(2.0 * M_PI * u2);
    has_cached_normal_ = true;
    return r * std::cos(2.0 * M_PI * u2);
}

double RngStream::gamma(double shape) {
    // Marsaglia-Tsang; boost small shapes through the power trick.
    if (shape < 1.0) {
        const double u = std::max(uniform(), 1e-300);
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(std::max(u, 1e-300)) <
            0.5 * x * x + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

double RngStream::student_t(double nu) {
    const double z = normal();
    const double c = chi_squared(nu);
    return z / std::sqrt(c / nu);
}

int RngStream::binomial(int m, double p) {
    int s = 0;
    for (int i = 0; i < m; ++i) s += bernoulli(p);
    return s;
}

}  // namespace powerlaw::num
