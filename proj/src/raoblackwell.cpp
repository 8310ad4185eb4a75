#include "powerlaw/raoblackwell.hpp"

#include <cmath>

#include "powerlaw/errors.hpp"

namespace powerlaw {

double deformed_expectation(const DeformedJoint& dj, const Theta& theta,
                            const EstimatorFn& g) {
    return dj.expectation(theta, g.eval);
}

double deformed_variance(const DeformedJoint& dj, const Theta& theta,
                         const EstimatorFn& g) {
    const double m = deformed_expectation(dj, theta, g);
    return dj.expectation(theta, [&](const Sample& s) {
        const double d = g.eval(s) - m;
        return d * d;
    });
}

double deformed_covariance(const DeformedJoint& dj, const Theta& theta,
                           const EstimatorFn& g1, const EstimatorFn& g2) {
    const double m1 = deformed_expectation(dj, theta, g1);
    const double m2 = deformed_expectation(dj, theta, g2);
    return dj.expectation(theta, [&](const Sample& s) {
        return (g1.eval(s) - m1) * (g2.eval(s) - m2);
    });
}

namespace {

// bucket -> E*_theta[estimator | bucket], exact on the enumerated space
std::map<std::vector<long long>, double> conditional_means(
    const DeformedJoint& dj, const StatisticFn& T, const Theta& theta,
    const EstimatorFn& estimator) {
    const std::vector<double>& w = dj.weights(theta);
    const num::GridSpace& sp = dj.space();
    std::map<std::vector<long long>, std::pair<double, double>> acc;
    for (std::size_t i = 0; i < sp.size(); ++i) {
        const Sample s = sp.sample_at(i);
        auto& [num_acc, mass] = acc[T.bucket(s)];
        num_acc += w[i] * estimator.eval(s);
        mass += w[i];
    }
    std::map<std::vector<long long>, double> out;
    for (auto& [k, v] : acc) {
        if (v.second <= 0.0) throw EmptyBucket("conditional_means: zero mass");
        out[k] = v.first / v.second;
    }
    return out;
}

}  // namespace

std::pair<EstimatorFn, RBReport> rao_blackwellize(
    const DeformedJoint& dj, const StatisticFn& T, const Theta& theta,
    const EstimatorFn& estimator, const std::vector<Theta>& theta_grid,
    double theta_tol) {
    auto means = conditional_means(dj, T, theta, estimator);
    // Sufficiency guard: the conditional must not move with theta.
    for (const Theta& t : theta_grid) {
        auto other = conditional_means(dj, T, t, estimator);
        for (const auto& [k, v] : means) {
            if (std::abs(other.at(k) - v) > theta_tol) {
                throw ThetaDependenceDetected(
                    "conditional expectation varies across theta by " +
                    std::to_string(std::abs(other.at(k) - v)) +
                    "; statistic not sufficient for this likelihood");
            }
        }
    }
    auto table = std::make_shared<std::map<std::vector<long long>, double>>(
        std::move(means));
    StatisticFn Tcopy = T;
    EstimatorFn phi;
    phi.name = "rb(" + estimator.name + ")";
    phi.eval = [table, Tcopy](const Sample& s) {
        return table->at(Tcopy.bucket(s));
    };

    RBReport rep;
    rep.theta = theta;
    rep.tau_star = deformed_expectation(dj, theta, estimator);
    rep.var_original = deformed_variance(dj, theta, estimator);
    rep.var_rb = deformed_variance(dj, theta, phi);
    rep.improvement = rep.var_original - rep.var_rb;
    double max_dev = 0.0;
    const num::GridSpace& sp = dj.space();
    for (std::size_t i = 0; i < sp.size(); ++i) {
        const Sample s = sp.sample_at(i);
        max_dev = std::max(max_dev,
                           std::abs(estimator.eval(s) - phi.eval(s)));
    }
    rep.equality_flag = max_dev < 1e-10;
    return {phi, rep};
}

double variance_decomposition_check(const DeformedJoint& dj,
                                    const StatisticFn& T, const Theta& theta,
                                    const EstimatorFn& estimator,
                                    const EstimatorFn& psi, double bias_tol) {
    const double tau = deformed_expectation(dj, theta, estimator);
    const double psi_mean = deformed_expectation(dj, theta, psi);
    if (std::abs(psi_mean - tau) > bias_tol) {
        throw PsiBiased("psi has deformed mean " + std::to_string(psi_mean) +
                        " but tau* = " + std::to_string(tau));
    }
    auto [phi, rep] = rao_blackwellize(dj, T, theta, estimator);
    const double lhs = rep.var_original;
    const double term1 = dj.expectation(theta, [&](const Sample& s) {
        const double d = estimator.eval(s) - psi.eval(s);
        return d * d;
    });
    const double term2 = deformed_variance(dj, theta, psi);
    const double term3 = 2.0 * dj.expectation(theta, [&](const Sample& s) {
        return psi.eval(s) * (phi.eval(s) - psi.eval(s));
    });
    return std::abs(lhs - (term1 + term2 + term3));
}

UniquenessVerdict uniqueness_probe(const DeformedJoint& dj,
                                   const StatisticFn& T, const Theta& theta,
                                   const std::vector<EstimatorFn>& pool,
                                   double tol) {
    (void)T;
    UniquenessVerdict v;
    if (pool.empty()) return v;
    std::vector<double> vars;
    vars.reserve(pool.size());
    for (const EstimatorFn& e : pool) {
        vars.push_back(deformed_variance(dj, theta, e));
    }
    std::size_t arg = 0;
    for (std::size_t i = 1; i < vars.size(); ++i) {
        if (vars[i] < vars[arg]) arg = i;
    }
    v.min_variance = vars[arg];
    v.argmin_name = pool[arg].name;
    const num::GridSpace& sp = dj.space();
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (i == arg || vars[i] > v.min_variance + tol) continue;
        // variance tie: estimators must agree pointwise
        double max_dev = 0.0;
        for (std::size_t s = 0; s < sp.size(); ++s) {
            const Sample smp = sp.sample_at(s);
            max_dev = std::max(max_dev, std::abs(pool[i].eval(smp) -
                                                 pool[arg].eval(smp)));
        }
        if (max_dev > 1e-10) {
            v.unique = false;
            v.tie_is_pointwise_equal = false;
        }
    }
    return v;
}

ClassicalRBReport classical_rb_exponential(const FamilySpec& spec, int n,
                                           const Theta& theta,
                                           const EstimatorFn& estimator) {
    if (spec.kind != FamilyKind::Exponential) {
        throw Error("classical_rb_exponential: exponent-shape family required");
    }
    DeformedJoint dj(spec, LikelihoodKind::log(), n);
    StatisticFn T = canonical_sufficient_statistic(spec);
    auto [phi, rep] = rao_blackwellize(dj, T, theta, estimator);
    EstimatorFn fbar{"mean_f", [&spec](const Sample& s) {
                         double acc = 0.0;
                         for (double x : s) acc += spec.f(x)[0];
                         return acc / s.size();
                     }};
    EstimatorFn psi{"phi_minus_fbar", [phi, fbar](const Sample& s) {
                        return phi.eval(s) - fbar.eval(s);
                    }};
    ClassicalRBReport out;
    out.rb = rep;
    out.cov_psi_fbar = deformed_covariance(dj, theta, psi, fbar);
    return out;
}

}  // namespace powerlaw
