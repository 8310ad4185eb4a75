#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace powerlaw::num {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

// Adaptive Simpson over [a, b]; infinite endpoints are handled by the
// substitution x = tan(u) so heavy polynomial tails are never truncated.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double rel_tol = 1e-10,
                           int max_subdivisions = 20000);

// Tensorized version over a box of dimension 1..3 (nested adaptive passes).
QuadratureResult integrate_box(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<std::pair<double, double>>& box, double rel_tol = 1e-8,
    int max_subdivisions = 20000);

struct FdResult {
    double value = 0.0;
    double richardson_ratio = 0.0;  // ~4 for a clean second-order stencil
    bool consistent = false;
};

// Central finite difference of order 1 or 2 with a half-step Richardson
// consistency probe. Throws NoisyFunction only when `strict` is set.
FdResult fd_derivative(const std::function<double(double)>& g, double x,
                       int order = 1, double h = 1e-5, bool strict = false);

// --- discrete enumeration ----------------------------------------------------

// Cartesian power of per-coordinate point lists, lexicographic order.
class GridSpace {
  public:
    GridSpace(std::vector<double> points_per_coordinate, int n);

    std::size_t size() const { return size_; }
    int dim() const { return n_; }
    const std::vector<double>& points() const { return points_; }

    // index -> sample, deterministic lexicographic order
    std::vector<double> sample_at(std::size_t index) const;

    static std::size_t max_space();  // POWERLAW_SUFF_MAX_SPACE override

  private:
    std::vector<double> points_;
    int n_;
    std::size_t size_;
};

// --- deterministic RNG streams ----------------------------------------------

// Counter-based stream: every (seed, tag, index) triple yields an independent
// reproducible generator regardless of call order.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0);

    double uniform();                    // [0, 1)
    double uniform(double a, double b);  // [a, b)
    double normal();                     // standard normal (Box-Muller)
    double gamma(double shape);          // shape >= 0.01, unit scale
    double chi_squared(double dof) { return 2.0 * gamma(dof / 2.0); }
    double student_t(double nu);
    int bernoulli(double p) { return uniform() < p ? 1 : 0; }
    int binomial(int m, double p);

  private:
    std::uint64_t next_raw();
    std::uint64_t state_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace powerlaw::num
