#pragma once

#include "powerlaw/deformed.hpp"

namespace powerlaw {

struct EstimatorFn {
    std::string name;
    std::function<double(const Sample&)> eval;
};

struct RBReport {
    Theta theta;
    double tau_star = 0.0;      // E*[estimator]
    double var_original = 0.0;  // Var*[estimator]
    double var_rb = 0.0;        // Var*[phi*(T)]
    double improvement = 0.0;   // var_original - var_rb >= 0
    bool equality_flag = false; // estimator already T-measurable
};

double deformed_expectation(const DeformedJoint& dj, const Theta& theta,
                            const EstimatorFn& g);
double deformed_variance(const DeformedJoint& dj, const Theta& theta,
                         const EstimatorFn& g);
double deformed_covariance(const DeformedJoint& dj, const Theta& theta,
                           const EstimatorFn& g1, const EstimatorFn& g2);

// phi*(T) = E*[estimator | T]. The conditional is computed on a theta grid;
// bucket values differing across the grid beyond `theta_tol` signal that T is
// not sufficient for the chosen likelihood.
std::pair<EstimatorFn, RBReport> rao_blackwellize(
    const DeformedJoint& dj, const StatisticFn& T, const Theta& theta,
    const EstimatorFn& estimator,
    const std::vector<Theta>& theta_grid = {}, double theta_tol = 1e-10);

// Three-term split of Var*[estimator] against a T-measurable psi that is
// unbiased for tau* = E*[estimator]; returns |LHS - RHS|.
double variance_decomposition_check(const DeformedJoint& dj,
                                    const StatisticFn& T, const Theta& theta,
                                    const EstimatorFn& estimator,
                                    const EstimatorFn& psi,
                                    double bias_tol = 1e-8);

struct UniquenessVerdict {
    bool unique = true;
    double min_variance = 0.0;
    std::string argmin_name;
    bool tie_is_pointwise_equal = true;
};

// Within a pool of T-measurable estimators sharing one deformed mean,
// variance ties within tol must be pointwise-equal estimators.
UniquenessVerdict uniqueness_probe(const DeformedJoint& dj,
                                   const StatisticFn& T, const Theta& theta,
                                   const std::vector<EstimatorFn>& pool,
                                   double tol = 1e-10);

struct ClassicalRBReport {
    RBReport rb;
    double cov_psi_fbar = 0.0;  // Cov[phi(f-bar) - f-bar, f-bar]
};

// Classical chain on an exponent-shape family under the log likelihood,
// including the covariance-orthogonality check.
ClassicalRBReport classical_rb_exponential(const FamilySpec& spec, int n,
                                           const Theta& theta,
                                           const EstimatorFn& estimator);

}  // namespace powerlaw
