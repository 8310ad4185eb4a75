#pragma once

#include "powerlaw/likelihoods.hpp"

namespace powerlaw {

struct EstimatingProblem {
    FamilySpec spec;
    LikelihoodKind likelihood;
    Sample sample;
    Theta init;
    std::vector<std::pair<double, double>> search_box;  // defaults to spec.box
    int max_iter = 400;
    double grad_tol = 1e-7;
    int multi_start = 5;
    std::uint64_t seed = 0;
};

struct SolveResult {
    Theta theta_hat;
    double objective = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    int starts = 0;
};

// Golden-section (1-d) / Nelder-Mead (2-d) maximization with Latin-hypercube
// multi-start and a finite-difference gradient certificate.
SolveResult maximize_likelihood(const EstimatingProblem& problem);

struct PolynomialEq {
    std::vector<double> coefficients;  // descending degree
    std::pair<double, double> domain{0.0, 1.0};
    bool degenerate_leading = false;

    double eval(double x) const;
};

// Stationarity polynomial of the Cauchy-Schwarz objective for two-trial
// binomial counts, from the empirical masses (p0, p1, p2). Descending
// coefficients; interior roots are the stationary thetas.
PolynomialEq binomial_cs_polynomial(const EmpiricalPMF& p_n);

// All real roots in (domain), via Durand-Kerner + Newton polish.
std::vector<double> real_roots_in_domain(const PolynomialEq& eq,
                                         double tol = 1e-12);

// Stationary points of the Cauchy-Schwarz objective located by a dense
// finite-difference sign scan plus bisection (the independent oracle the
// polynomial is checked against).
std::vector<double> cs_stationary_points_fd(const EmpiricalPMF& p_n,
                                            const FamilySpec& spec,
                                            double grid_step = 1e-4);

// Jones estimate for the Student family using only the sufficient pair
// (sum x, sum x^2); invariant across samples sharing those sums.
std::pair<double, double> jones_estimate_from_suffstats(double sum_x,
                                                        double sum_x2, int n,
                                                        double nu);

struct RobustRow {
    int replication = 0;
    double mu_jones = 0.0;
    double mu_mle = 0.0;
    double abs_err_jones = 0.0;
    double abs_err_mle = 0.0;
    bool jones_wins = false;
};

struct RobustDemo {
    std::vector<RobustRow> rows;
    double jones_win_rate = 0.0;
};

// Location estimation on unit-variance normal data with a fraction of the
// sample replaced by a fixed outlier; compares the alpha-downweighted
// estimate against the sample mean.
RobustDemo robust_contamination_demo(double clean_frac, double outlier_value,
                                     int n, double alpha, int replications,
                                     std::uint64_t seed);

}  // namespace powerlaw
