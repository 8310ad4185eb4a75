#include "powerlaw/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "powerlaw/errors.hpp"
#include "powerlaw/numerics.hpp"

namespace powerlaw {

namespace {

constexpr double kNegInf = -1e300;

double safe_eval(const std::function<double(const Theta&)>& obj,
                 const Theta& t) {
    try {
        const double v = obj(t);
        return std::isfinite(v) ? v : kNegInf;
    } catch (const Error&) {
        return kNegInf;
    }
}

// maximization over [a, b]
double golden_section(const std::function<double(const Theta&)>& obj, double a,
                      double b, int max_iter) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = safe_eval(obj, {c}), fd = safe_eval(obj, {d});
    for (int i = 0; i < max_iter && (b - a) > 1e-13; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = safe_eval(obj, {c});
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = safe_eval(obj, {d});
        }
    }
    return 0.5 * (a + b);
}

Theta nelder_mead(const std::function<double(const Theta&)>& obj,
                  const Theta& init, double scale, int max_iter) {
    const int k = static_cast<int>(init.size());
    std::vector<std::pair<double, Theta>> simplex;
    simplex.emplace_back(safe_eval(obj, init), init);
    for (int i = 0; i < k; ++i) {
        Theta t = init;
        t[i] += scale;
        simplex.emplace_back(safe_eval(obj, t), t);
    }
    auto order = [&] {
        std::sort(simplex.begin(), simplex.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
    };
    order();
    for (int it = 0; it < max_iter; ++it) {
        order();
        if (std::abs(simplex.front().first - simplex.back().first) < 1e-14 &&
            it > 20) {
            break;
        }
        Theta centroid(k, 0.0);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) centroid[j] += simplex[i].second[j];
        }
        for (double& c : centroid) c /= k;
        const Theta& worst = simplex.back().second;
        Theta refl(k);
        for (int j = 0; j < k; ++j) refl[j] = 2.0 * centroid[j] - worst[j];
        const double fr = safe_eval(obj, refl);
        if (fr > simplex.front().first) {
            Theta exp_(k);
            for (int j = 0; j < k; ++j) exp_[j] = 3.0 * centroid[j] - 2.0 * worst[j];
            const double fe = safe_eval(obj, exp_);
            simplex.back() = fe > fr ? std::make_pair(fe, exp_)
                                     : std::make_pair(fr, refl);
            continue;
        }
        if (fr > simplex[simplex.size() - 2].first) {
            simplex.back() = {fr, refl};
            continue;
        }
        Theta contr(k);
        for (int j = 0; j < k; ++j) contr[j] = 0.5 * (centroid[j] + worst[j]);
        const double fc = safe_eval(obj, contr);
        if (fc > simplex.back().first) {
            simplex.back() = {fc, contr};
            continue;
        }
        for (std::size_t i = 1; i < simplex.size(); ++i) {
            for (int j = 0; j < k; ++j) {
                simplex[i].second[j] =
                    0.5 * (simplex[i].second[j] + simplex[0].second[j]);
            }
            simplex[i].first = safe_eval(obj, simplex[i].second);
        }
    }
    order();
    return simplex.front().second;
}

double fd_grad_norm(const std::function<double(const Theta&)>& obj,
                    const Theta& t, double h = 1e-6) {
    double acc = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        Theta lo = t, hi = t;
        lo[i] -= h;
        hi[i] += h;
        const double g = (safe_eval(obj, hi) - safe_eval(obj, lo)) / (2.0 * h);
        acc += g * g;
    }
    return std::sqrt(acc);
}

}  // namespace

SolveResult maximize_likelihood(const EstimatingProblem& problem) {
    const auto& box =
        problem.search_box.empty() ? problem.spec.box : problem.search_box;
    auto obj = [&](const Theta& t) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] <= box[i].first || t[i] >= box[i].second) return kNegInf;
        }
        return generalized_likelihood(problem.likelihood, problem.spec, t,
                                      problem.sample);
    };
    if (safe_eval(obj, problem.init) <= kNegInf) {
        throw Error("maximize_likelihood: objective not finite at init");
    }
    const int k = static_cast<int>(box.size());
    num::RngStream rng(problem.seed, 0x6f707469ULL);
    std::vector<Theta> starts{problem.init};
    // Latin-hypercube style stratified starts across the box
    for (int s = 1; s < problem.multi_start; ++s) {
        Theta t(k);
        for (int i = 0; i < k; ++i) {
            const double lo = box[i].first, hi = box[i].second;
            const double stratum = (s - 1 + rng.uniform()) /
                                   std::max(problem.multi_start - 1, 1);
            t[i] = lo + (hi - lo) * (0.05 + 0.9 * stratum);
        }
        starts.push_back(t);
    }
    SolveResult best;
    best.objective = kNegInf;
    for (const Theta& start : starts) {
        Theta cand;
        if (k == 1) {
            (void)start;
            cand = {golden_section(obj, box[0].first + 1e-12,
                                   box[0].second - 1e-12, problem.max_iter)};
        } else {
            const double scale = 0.1 * (box[0].second - box[0].first);
            cand = nelder_mead(obj, start, scale, problem.max_iter);
        }
        const double v = safe_eval(obj, cand);
        ++best.starts;
        if (v > best.objective) {
            best.objective = v;
            best.theta_hat = cand;
        }
        if (k == 1) break;  // golden section is global over the box scan
    }
    if (best.objective <= kNegInf) {
        throw NoInteriorMax("maximize_likelihood: no finite objective found");
    }
    for (int i = 0; i < k; ++i) {
        const double span = box[i].second - box[i].first;
        if (best.theta_hat[i] < box[i].first + 1e-9 * span ||
            best.theta_hat[i] > box[i].second - 1e-9 * span) {
            throw NoInteriorMax("maximize_likelihood: maximizer on boundary");
        }
    }
    best.grad_norm = fd_grad_norm(obj, best.theta_hat);
    return best;
}

double PolynomialEq::eval(double x) const {
    double acc = 0.0;
    for (double c : coefficients) acc = acc * x + c;
    return acc;
}

PolynomialEq binomial_cs_polynomial(const EmpiricalPMF& p_n) {
    p_n.validate();
    if (p_n.atoms.size() != 3) {
        throw Error("binomial_cs_polynomial: support {0,1,2} required");
    }
    const double p0 = p_n.masses[0], p1 = p_n.masses[1], p2 = p_n.masses[2];
    PolynomialEq eq;
    eq.coefficients = {
        -6.0 * p0 + 12.0 * p1 - 6.0 * p2,
        24.0 * p0 - 30.0 * p1 + 6.0 * p2,
        -36.0 * p0 + 24.0 * p1,
        26.0 * p0 - 6.0 * p1 - 2.0 * p2,
        -9.0 * p0 - 2.0 * p1 + p2,
        p0 + p1,
    };
    eq.domain = {0.0, 1.0};
    eq.degenerate_leading = std::abs(eq.coefficients.front()) < 1e-14;
    return eq;
}

std::vector<double> real_roots_in_domain(const PolynomialEq& eq, double tol) {
    std::vector<double> c = eq.coefficients;
    while (c.size() > 1 && std::abs(c.front()) < 1e-13) c.erase(c.begin());
    const int deg = static_cast<int>(c.size()) - 1;
    std::vector<double> out;
    if (deg < 1) return out;
    // Durand-Kerner on the monic normalization
    std::vector<std::complex<double>> monic(c.begin(), c.end());
    for (auto& v : monic) v /= c.front();
    std::vector<std::complex<double>> roots(deg);
    std::complex<double> seed(0.4, 0.9);
    std::complex<double> acc(1.0, 0.0);
    for (int i = 0; i < deg; ++i) {
        roots[i] = acc;
        acc *= seed;
    }
    auto peval = [&](std::complex<double> x) {
        std::complex<double> a(0.0, 0.0);
        for (const auto& cc : monic) a = a * x + cc;
        return a;
    };
    for (int it = 0; it < 500; ++it) {
        double shift = 0.0;
        for (int i = 0; i < deg; ++i) {
            std::complex<double> d(1.0, 0.0);
            for (int j = 0; j < deg; ++j) {
                if (j != i) d *= roots[i] - roots[j];
            }
            const std::complex<double> delta = peval(roots[i]) / d;
            roots[i] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-14) break;
    }
    auto deriv = [&](double x) {
        double a = 0.0;
        const int d = static_cast<int>(monic.size()) - 1;
        for (int i = 0; i < d; ++i) {
            a = a * x + monic[i].real() * (d - i);
        }
        return a;
    };
    for (const auto& r : roots) {
        if (std::abs(r.imag()) > 1e-8) continue;
        double x = r.real();
        // Newton polish on the real axis
        for (int it = 0; it < 40; ++it) {
            const double fx = peval({x, 0.0}).real();
            const double dx = deriv(x);
            if (std::abs(dx) < 1e-300) break;
            const double step = fx / dx;
            x -= step;
            if (std::abs(step) < tol) break;
        }
        if (x > eq.domain.first + 1e-12 && x < eq.domain.second - 1e-12) {
            bool dup = false;
            for (double prev : out) dup = dup || std::abs(prev - x) < 1e-9;
            if (!dup) out.push_back(x);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> cs_stationary_points_fd(const EmpiricalPMF& p_n,
                                            const FamilySpec& spec,
                                            double grid_step) {
    auto obj = [&](double th) {
        return cauchy_schwarz_likelihood(p_n, spec, {th});
    };
    auto dobj = [&](double th) {
        const double h = 1e-7;
        return (obj(th + h) - obj(th - h)) / (2.0 * h);
    };
    std::vector<double> out;
    const double lo = 1e-4, hi = 1.0 - 1e-4;
    double prev_x = lo, prev_d = dobj(lo);
    for (double x = lo + grid_step; x <= hi; x += grid_step) {
        const double d = dobj(x);
        if (prev_d == 0.0 || (prev_d < 0.0) != (d < 0.0)) {
            double a = prev_x, b = x, da = prev_d;
            for (int it = 0; it < 100; ++it) {
                const double m = 0.5 * (a + b);
                const double dm = dobj(m);
                if ((dm < 0.0) == (da < 0.0)) {
                    a = m;
                    da = dm;
                } else {
                    b = m;
                }
            }
            out.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_d = d;
    }
    return out;
}

std::pair<double, double> jones_estimate_from_suffstats(double sum_x,
                                                        double sum_x2, int n,
                                                        double nu) {
    if (n < 2 || !(sum_x2 > sum_x * sum_x / n + 1e-12)) {
        throw DegenerateSample(
            "jones_estimate_from_suffstats: need n >= 2 and spread data");
    }
    auto [spec, theta0] = student_as_m_alpha(nu, 0.0, 1.0);
    const double alpha = spec.alpha;
    const double f1 = sum_x2 / n, f2 = sum_x / n;
    // The averaged density power is linear in (mean x^2, mean x), so the
    // objective needs the sample only through the two sums.
    auto obj = [&, spec = spec](const Theta& t) {
        const std::vector<double> wv = spec.w(t);
        const double base = 1.0 + wv[0] * f1 + wv[1] * f2;
        if (base <= 0.0) return kNegInf;
        const double z = normalizer(spec, t);
        return std::log(z) + std::log(base) / (alpha - 1.0) -
               std::log(lp_norm(spec, t, alpha));
    };
    const double mean = sum_x / n;
    const double var = sum_x2 / n - mean * mean;
    Theta init{mean, std::max(var * (nu - 2.0) / nu, 1e-4)};
    Theta best = init;
    double best_v = safe_eval(obj, init);
    for (int s = 0; s < 3; ++s) {
        Theta start = init;
        start[0] += (s - 1) * std::sqrt(var);
        start[1] *= std::pow(2.0, s - 1);
        const Theta cand = nelder_mead(obj, start, 0.3 * std::sqrt(var), 600);
        const double v = safe_eval(obj, cand);
        if (v > best_v) {
            best_v = v;
            best = cand;
        }
    }
    const double gn = fd_grad_norm(obj, best, 1e-7);
    if (gn > 1e-6) {
        throw NoInteriorMax("jones_estimate_from_suffstats: gradient norm " +
                            std::to_string(gn));
    }
    return {best[0], best[1]};
}

RobustDemo robust_contamination_demo(double clean_frac, double outlier_value,
                                     int n, double alpha, int replications,
                                     std::uint64_t seed) {
    RobustDemo demo;
    const double mu_true = 0.0;
    const int n_out = n - static_cast<int>(std::lround(clean_frac * n));
    int wins = 0;
    for (int r = 0; r < replications; ++r) {
        num::RngStream rng(seed, 0x726f6275ULL, static_cast<std::uint64_t>(r));
        Sample x(n);
        for (int i = 0; i < n; ++i) {
            x[i] = i < n - n_out ? mu_true + rng.normal() : outlier_value;
        }
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= n;
        // alpha-downweighted location score on the unit-variance normal:
        // maximize sum_i exp(-(alpha-1)(x_i - mu)^2 / 2); the norm term does
        // not depend on mu.
        auto obj = [&](const Theta& t) {
            double acc = 0.0;
            for (double v : x) {
                const double d = v - t[0];
                acc += std::exp(-(alpha - 1.0) * d * d / 2.0);
            }
            return std::log(acc);
        };
        // coarse scan (the objective is multimodal under contamination)
        double lo = *std::min_element(x.begin(), x.end()) - 1.0;
        double hi = *std::max_element(x.begin(), x.end()) + 1.0;
        double best_m = lo, best_v = kNegInf;
        for (double m = lo; m <= hi; m += 0.05) {
            const double v = obj({m});
            if (v > best_v) {
                best_v = v;
                best_m = m;
            }
        }
        const double mu_j =
            golden_section(obj, best_m - 0.1, best_m + 0.1, 200);
        RobustRow row;
        row.replication = r;
        row.mu_jones = mu_j;
        row.mu_mle = mean;
        row.abs_err_jones = std::abs(mu_j - mu_true);
        row.abs_err_mle = std::abs(mean - mu_true);
        row.jones_wins = row.abs_err_jones < row.abs_err_mle;
        wins += row.jones_wins ? 1 : 0;
        demo.rows.push_back(row);
    }
    demo.jones_win_rate = static_cast<double>(wins) / replications;
    return demo;
}

}  // namespace powerlaw
