#pragma once

#include "powerlaw/raoblackwell.hpp"

namespace powerlaw {

struct BoundReport {
    Theta theta;
    double tau_star_prime = 0.0;  // finite-difference derivative of tau*
    double gen_fisher = 0.0;      // deformed-score information functional
    double classical_fisher = 0.0;
    double gen_crlb = 0.0;
    double classical_crlb = 0.0;
    double var_of_fbar = 0.0;
};

// d/dtheta log p*_theta(sample), central finite differences (scalar theta).
double score_star(const DeformedJoint& dj, const Theta& theta,
                  const Sample& sample, double h = 1e-6);

// 1/I = Var*[p*^(alpha-1) s*] / Cov*[s*, p*^(alpha-1) s*]^2.
double gen_fisher_info(const DeformedJoint& dj, const Theta& theta,
                       double h = 1e-6);

// Var*[s*].
double classical_fisher_info(const DeformedJoint& dj, const Theta& theta,
                             double h = 1e-6);

// tau*(theta) = E*_theta[f-bar] and its FD derivative.
double tau_star(const DeformedJoint& dj, const Theta& theta);
double tau_star_prime(const DeformedJoint& dj, const Theta& theta,
                      double h = 1e-5);

// Pool members must be unbiased for tau* (deformed mean equal to E*[f-bar]
// at theta and theta +- delta); each variance is compared against the
// generalized lower bound.
BoundReport m_alpha_crlb_check(const DeformedJoint& dj, const Theta& theta,
                               const std::vector<EstimatorFn>& pool,
                               double tol = 1e-10);

struct StudentClosedForms {
    double alpha = 0.0, nu = 0.0;
    int n = 0;
    double A_n = 0.0, B_n = 0.0, C_n = 0.0;
    // Gamma-function form, validated against quadrature.
    double H_n = 0.0;
    double E_star_xbar2_coeff = 0.0;    // times sigma^2
    double gen_crlb_sigma4_coeff = 0.0; // times sigma^4
    // Parity-branch forms as printed in the source material, carried next to
    // the validated ones; flags mark relative disagreement beyond 1e-4.
    double H_n_printed = 0.0;
    double E_star_xbar2_coeff_printed = 0.0;
    double gen_crlb_sigma4_coeff_printed = 0.0;
    bool H_n_discrepancy = false;
    bool moment_discrepancy = false;
    bool crlb_discrepancy = false;
};

// Validity thresholds (alpha > 1-2/n for H_n, alpha > n/(n+2) for the
// moment, alpha > (n+2)/(n+4) for the variance coefficient) are enforced
// with ValidityViolated; quantities beyond a violated threshold stay NaN.
StudentClosedForms student_closed_forms(double nu, int n,
                                        bool require_all_valid = true);

struct BasuLocationBound {
    double nu = 0.0, alpha = 0.0;
    double var_xbar_coeff = 0.0;  // n-independent Var*[x-bar]
    double quadrature_check = 0.0;  // same quantity from 1-d quadrature
    double affine_log_residual = 0.0;  // log p* affine in (h-bar, f-bar)
};

BasuLocationBound basu_student_location_bound(double nu);

}  // namespace powerlaw
