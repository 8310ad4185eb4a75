#include "powerlaw/bounds.hpp"

#include <cmath>

#include "powerlaw/errors.hpp"

namespace powerlaw {

namespace {

void require_scalar_theta(const DeformedJoint& dj, const Theta& theta) {
    if (theta.size() != 1 || dj.spec().theta_dim != 1) {
        throw Error("bounds: scalar-parameter families only");
    }
}

Theta shifted(const Theta& theta, double d) {
    Theta t = theta;
    t[0] += d;
    return t;
}

}  // namespace

double score_star(const DeformedJoint& dj, const Theta& theta,
                  const Sample& sample, double h) {
    require_scalar_theta(dj, theta);
    const double lo = std::log(dj.deformed_density(shifted(theta, -h), sample));
    const double hi = std::log(dj.deformed_density(shifted(theta, h), sample));
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw BoundaryTheta("score_star: log p* not finite near theta");
    }
    return (hi - lo) / (2.0 * h);
}

namespace {

struct ScoreTable {
    std::vector<double> w;      // p*(x) masses
    std::vector<double> score;  // s*(x)
};

ScoreTable score_table(const DeformedJoint& dj, const Theta& theta, double h) {
    require_scalar_theta(dj, theta);
    const std::vector<double>& w = dj.weights(theta);
    const std::vector<double>& wlo = dj.weights(shifted(theta, -h));
    const std::vector<double>& whi = dj.weights(shifted(theta, h));
    ScoreTable t;
    t.w = w;
    t.score.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        t.score[i] = (std::log(whi[i]) - std::log(wlo[i])) / (2.0 * h);
    }
    return t;
}

struct MomentAccumulator {
    double mean_a = 0.0, mean_b = 0.0, var_a = 0.0, cov_ab = 0.0, var_b = 0.0;
};

MomentAccumulator moments(const std::vector<double>& w,
                          const std::vector<double>& a,
                          const std::vector<double>& b) {
    MomentAccumulator m;
    for (std::size_t i = 0; i < w.size(); ++i) {
        m.mean_a += w[i] * a[i];
        m.mean_b += w[i] * b[i];
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double da = a[i] - m.mean_a, db = b[i] - m.mean_b;
        m.var_a += w[i] * da * da;
        m.var_b += w[i] * db * db;
        m.cov_ab += w[i] * da * db;
    }
    return m;
}

}  // namespace

double gen_fisher_info(const DeformedJoint& dj, const Theta& theta, double h) {
    ScoreTable t = score_table(dj, theta, h);
    const double alpha = dj.likelihood().alpha;
    std::vector<double> u(t.w.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = std::pow(t.w[i], alpha - 1.0) * t.score[i];
    }
    MomentAccumulator m = moments(t.w, t.score, u);
    if (std::abs(m.cov_ab) < 1e-14) {
        throw ZeroCovariance("gen_fisher_info: Cov*[s*, p*^(a-1) s*] ~ 0");
    }
    return m.cov_ab * m.cov_ab / m.var_b;
}

double classical_fisher_info(const DeformedJoint& dj, const Theta& theta,
                             double h) {
    ScoreTable t = score_table(dj, theta, h);
    MomentAccumulator m = moments(t.w, t.score, t.score);
    if (m.var_a <= 0.0) {
        throw ZeroCovariance("classical_fisher_info: zero variance score");
    }
    return m.var_a;
}

double tau_star(const DeformedJoint& dj, const Theta& theta) {
    StatisticFn fbar = stat_mean_f(dj.spec());
    return dj.expectation(theta,
                          [&](const Sample& s) { return fbar.eval(s)[0]; });
}

double tau_star_prime(const DeformedJoint& dj, const Theta& theta, double h) {
    require_scalar_theta(dj, theta);
    return (tau_star(dj, shifted(theta, h)) -
            tau_star(dj, shifted(theta, -h))) /
           (2.0 * h);
}

BoundReport m_alpha_crlb_check(const DeformedJoint& dj, const Theta& theta,
                               const std::vector<EstimatorFn>& pool,
                               double tol) {
    require_scalar_theta(dj, theta);
    BoundReport rep;
    rep.theta = theta;
    rep.tau_star_prime = tau_star_prime(dj, theta);
    rep.gen_fisher = gen_fisher_info(dj, theta);
    rep.classical_fisher = classical_fisher_info(dj, theta);
    rep.gen_crlb = rep.tau_star_prime * rep.tau_star_prime / rep.gen_fisher;
    rep.classical_crlb =
        rep.tau_star_prime * rep.tau_star_prime / rep.classical_fisher;
    StatisticFn fbar_stat = stat_mean_f(dj.spec());
    EstimatorFn fbar{"mean_f", [fbar_stat](const Sample& s) {
                         return fbar_stat.eval(s)[0];
                     }};
    rep.var_of_fbar = deformed_variance(dj, theta, fbar);
    const double delta = 1e-3;
    for (const EstimatorFn& e : pool) {
        for (double d : {-delta, 0.0, delta}) {
            const Theta t = shifted(theta, d);
            const double mean = deformed_expectation(dj, t, e);
            const double target = tau_star(dj, t);
            if (std::abs(mean - target) > 1e-8) {
                throw PsiBiased(e.name + ": deformed mean " +
                                std::to_string(mean) + " != tau* " +
                                std::to_string(target));
            }
        }
        const double var = deformed_variance(dj, theta, e);
        if (var < rep.gen_crlb - tol) {
            throw AssertionFailed(e.name + ": variance " +
                                  std::to_string(var) +
                                  " below the generalized lower bound " +
                                  std::to_string(rep.gen_crlb));
        }
    }
    return rep;
}

namespace {

bool rel_differs(double a, double b) {
    return std::abs(a - b) > 1e-4 * std::max({std::abs(a), std::abs(b), 1e-12});
}

}  // namespace

StudentClosedForms student_closed_forms(double nu, int n,
                                        bool require_all_valid) {
    if (!(nu > 2.0) || n < 1) {
        throw ValidityViolated("student_closed_forms: nu > 2, n >= 1");
    }
    StudentClosedForms r;
    r.nu = nu;
    r.n = n;
    r.alpha = student_alpha(nu);
    const double a = r.alpha;
    const double b = b_alpha(a);
    const double m = 1.0 / (1.0 - a);  // = (nu+1)/2
    const double nan = std::nan("");
    r.A_n = (1.0 - a) * (n - 2.0) / (2.0 - n * (1.0 - a));
    r.B_n = n * (1.0 - a) / (2.0 * a - n * (1.0 - a));
    r.C_n = (1.0 - a) * (n + 2.0) / (2.0 * a + (n + 2.0) * (a - 1.0));
    const int k = n / 2;  // parity index: n = 2k or n = 2k+1

    const bool h_valid = a > 1.0 - 2.0 / n;
    const bool moment_valid = a > double(n) / (n + 2.0);
    const bool crlb_valid = a > double(n + 2) / (n + 4.0);
    if (require_all_valid && !(h_valid && moment_valid && crlb_valid)) {
        throw ValidityViolated(
            std::string("student_closed_forms: requires alpha > 1-2/n (H), "
                        "alpha > n/(n+2) (moment), alpha > (n+2)/(n+4) "
                        "(variance); alpha=") +
            std::to_string(a));
    }

    if (h_valid) {
        r.H_n = std::pow(n * M_PI / b, n / 2.0) * std::tgamma(m - n / 2.0) /
                std::tgamma(m);
        if (n % 2 == 1) {
            r.H_n_printed = std::sqrt(M_PI * b) *
                            std::pow(n * M_PI / b, n / 2.0) *
                            std::tgamma((1.0 + a) / (2.0 * (1.0 - a))) *
                            std::pow(r.A_n, k) /
                            (std::tgamma(n / 2.0) * std::tgamma(1.0 / (1.0 - a)));
        } else {
            r.H_n_printed = std::pow(n * M_PI / b, n / 2.0) * (1.0 - a) *
                            std::pow(r.A_n, k - 1) /
                            (a * std::tgamma(n / 2.0));
        }
        r.H_n_discrepancy = rel_differs(r.H_n, r.H_n_printed);
    } else {
        r.H_n = r.H_n_printed = nan;
    }

    if (moment_valid) {
        r.E_star_xbar2_coeff = r.B_n / b;
        r.E_star_xbar2_coeff_printed =
            (n % 2 == 0)
                ? std::pow(r.A_n, 2 - k) * std::pow(r.B_n, k - 1) / b
                : std::pow(r.A_n, 1 - k) * std::pow(r.B_n, k) / b;
        r.moment_discrepancy =
            rel_differs(r.E_star_xbar2_coeff, r.E_star_xbar2_coeff_printed);
    } else {
        r.E_star_xbar2_coeff = r.E_star_xbar2_coeff_printed = nan;
    }

    if (crlb_valid) {
        r.gen_crlb_sigma4_coeff = r.B_n * (r.C_n - r.B_n) / (b * b);
        r.gen_crlb_sigma4_coeff_printed =
            (n % 2 == 1)
                ? std::pow(r.A_n, 2 - k) *
                      (std::pow(r.C_n, k) -
                       std::pow(r.A_n, -k) * std::pow(r.B_n, 2 * k)) /
                      (b * b)
                : std::pow(r.A_n, 3 - k) *
                      (std::pow(r.C_n, k - 1) -
                       std::pow(r.A_n, 1 - k) * std::pow(r.B_n, 2 * k - 1)) /
                      (b * b);
        r.crlb_discrepancy = rel_differs(r.gen_crlb_sigma4_coeff,
                                         r.gen_crlb_sigma4_coeff_printed);
    } else {
        r.gen_crlb_sigma4_coeff = r.gen_crlb_sigma4_coeff_printed = nan;
    }
    return r;
}

namespace {

// least-squares fit y ~ X beta for a small column count, normal equations
std::vector<double> lsq_fit(const std::vector<std::vector<double>>& rows,
                            const std::vector<double>& y) {
    const std::size_t p = rows[0].size();
    std::vector<std::vector<double>> ata(p, std::vector<double>(p, 0.0));
    std::vector<double> aty(p, 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t i = 0; i < p; ++i) {
            aty[i] += rows[r][i] * y[r];
            for (std::size_t j = 0; j < p; ++j) {
                ata[i][j] += rows[r][i] * rows[r][j];
            }
        }
    }
    // Gaussian elimination with partial pivoting
    for (std::size_t c = 0; c < p; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < p; ++r) {
            if (std::abs(ata[r][c]) > std::abs(ata[piv][c])) piv = r;
        }
        std::swap(ata[c], ata[piv]);
        std::swap(aty[c], aty[piv]);
        for (std::size_t r = 0; r < p; ++r) {
            if (r == c || ata[c][c] == 0.0) continue;
            const double fct = ata[r][c] / ata[c][c];
            for (std::size_t cc = 0; cc < p; ++cc) ata[r][cc] -= fct * ata[c][cc];
            aty[r] -= fct * aty[c];
        }
    }
    std::vector<double> beta(p);
    for (std::size_t c = 0; c < p; ++c) beta[c] = aty[c] / ata[c][c];
    return beta;
}

}  // namespace

BasuLocationBound basu_student_location_bound(double nu) {
    BasuLocationBound out;
    out.nu = nu;
    out.alpha = student_alpha(nu);
    const double a = out.alpha;
    const double b = b_alpha(a);
    const double na = std::pow(student_norm_const(nu, 1.0), a - 1.0);
    out.var_xbar_coeff = (1.0 - a) / (2.0 * a * b * na);

    // 1-d quadrature check of Var*[x] at a nonzero location
    auto [spec, theta] = student_as_b_alpha(nu, 0.7);
    DeformedJoint dj(spec, LikelihoodKind::basu(a), 1);
    EstimatorFn x{"x", [](const Sample& s) { return s[0]; }};
    out.quadrature_check = deformed_variance(dj, theta, x);

    // affine-log structure of the n=2 joint: log p~* = c0 + c1 h-bar + c2 f-bar
    DeformedJoint dj2(spec, LikelihoodKind::basu(a), 2);
    std::vector<std::vector<double>> rows;
    std::vector<double> ys;
    for (double x1 = -3.0; x1 <= 3.0; x1 += 1.2) {
        for (double x2 = -3.0; x2 <= 3.0; x2 += 1.2) {
            const Sample s{x1, x2};
            const double hbar = 0.5 * (spec.h(x1) + spec.h(x2));
            const double fbar = 0.5 * (x1 + x2);
            rows.push_back({1.0, hbar, fbar});
            ys.push_back(
                basu_likelihood(spec, theta, s, a));  // log p~* up to a shift
        }
    }
    const std::vector<double> beta = lsq_fit(rows, ys);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double fit = beta[0] + beta[1] * rows[i][1] + beta[2] * rows[i][2];
        out.affine_log_residual =
            std::max(out.affine_log_residual, std::abs(fit - ys[i]));
    }
    return out;
}

}  // namespace powerlaw
