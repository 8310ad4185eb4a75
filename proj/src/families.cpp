#include "powerlaw/families.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "powerlaw/errors.hpp"

namespace powerlaw {

bool Support::contains(double x) const {
    if (finite) {
        return std::any_of(atoms.begin(), atoms.end(),
                           [x](double a) { return std::abs(a - x) < 1e-12; });
    }
    return x >= lo && x <= hi;
}

void check_theta_in_box(const FamilySpec& spec, const Theta& theta) {
    if (static_cast<int>(theta.size()) != spec.theta_dim) {
        throw BoundaryTheta(spec.name + ": theta has dimension " +
                            std::to_string(theta.size()) + ", expected " +
                            std::to_string(spec.theta_dim));
    }
    for (int i = 0; i < spec.theta_dim; ++i) {
        if (!(theta[i] > spec.box[i].first && theta[i] < spec.box[i].second)) {
            throw BoundaryTheta(spec.name + ": theta[" + std::to_string(i) +
                                "]=" + std::to_string(theta[i]) +
                                " not strictly inside the parameter box");
        }
    }
}

double FamilySpec::base(const Theta& theta, double x) const {
    const std::vector<double> wv = w(theta);
    const std::vector<double> fv = f(x);
    double b = h ? h(x) : 0.0;
    if (kind == FamilyKind::BAlpha) b += F(theta);
    for (std::size_t i = 0; i < wv.size(); ++i) b += wv[i] * fv[i];
    return b;
}

double density(const FamilySpec& spec, const Theta& theta, double x) {
    check_theta_in_box(spec, theta);
    if (!spec.support.contains(x)) return 0.0;
    const double b = spec.base(theta, x);
    if (spec.kind == FamilyKind::Exponential) {
        return std::exp(b) / normalizer(spec, theta);
    }
    if (b <= 0.0) {
        throw NonPositiveBase(spec.name + ": base " + std::to_string(b) +
                              " at x=" + std::to_string(x));
    }
    const double p = std::pow(b, 1.0 / (spec.alpha - 1.0));
    if (spec.kind == FamilyKind::BAlpha) return p;
    return normalizer(spec, theta) * p;
}

namespace {

double raw_mass(const FamilySpec& spec, const Theta& theta) {
    // Integral or sum of the unnormalized shape.
    auto shape = [&](double x) {
        if (!spec.support.contains(x)) return 0.0;
        const double b = spec.base(theta, x);
        if (spec.kind == FamilyKind::Exponential) return std::exp(b);
        if (b <= 0.0) {
            throw NonPositiveBase(spec.name + ": base " + std::to_string(b) +
                                  " at x=" + std::to_string(x));
        }
        return std::pow(b, 1.0 / (spec.alpha - 1.0));
    };
    if (spec.support.finite) {
        double s = 0.0;
        for (double a : spec.support.atoms) s += shape(a);
        return s;
    }
    num::QuadratureResult q =
        num::integrate(shape, spec.support.lo, spec.support.hi, 1e-10);
    if (!q.converged || !std::isfinite(q.value) || q.value <= 0.0) {
        throw DivergentIntegral(spec.name +
                                ": normalizing integral did not converge");
    }
    return q.value;
}

}  // namespace

double normalizer(const FamilySpec& spec, const Theta& theta) {
    check_theta_in_box(spec, theta);
    if (spec.closed_form_normalizer) return spec.closed_form_normalizer(theta);
    if (spec.kind == FamilyKind::BAlpha) return 1.0;
    // Exponential: partition function (divides); MAlpha: Z (multiplies).
    const double mass = raw_mass(spec, theta);
    return spec.kind == FamilyKind::Exponential ? mass : 1.0 / mass;
}

namespace {

// Jacobi eigenvalue sweep for small symmetric matrices.
double min_eigenvalue(std::vector<std::vector<double>> a) {
    const int n = static_cast<int>(a.size());
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-24) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-18) continue;
                const double phi =
                    0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
                const double c = std::cos(phi), s = std::sin(phi);
                for (int k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    double m = a[0][0];
    for (int i = 1; i < n; ++i) m = std::min(m, a[i][i]);
    return m;
}

double gram_min_eig(const std::vector<std::vector<double>>& columns) {
    const int k = static_cast<int>(columns.size());
    std::vector<std::vector<double>> g(k, std::vector<double>(k, 0.0));
    std::vector<double> norms(k, 0.0);
    for (int i = 0; i < k; ++i) {
        for (double v : columns[i]) norms[i] += v * v;
        norms[i] = std::sqrt(std::max(norms[i], 1e-300));
    }
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            double dot = 0.0;
            for (std::size_t r = 0; r < columns[i].size(); ++r)
                dot += columns[i][r] * columns[j][r];
            g[i][j] = dot / (norms[i] * norms[j]);
        }
    }
    return min_eigenvalue(g);
}

}  // namespace

RegularityReport regularity_check(const FamilySpec& spec,
                                  const std::vector<Theta>& theta_probes,
                                  const std::vector<double>& x_probes) {
    const std::size_t need = static_cast<std::size_t>(spec.stat_dim) + 2;
    if (theta_probes.size() < need || x_probes.size() < need) {
        throw InsufficientProbes(spec.name + ": need at least " +
                                 std::to_string(need) + " probes");
    }
    RegularityReport rep;
    rep.support_theta_free = true;  // Support carries no theta dependence.

    std::vector<std::vector<double>> wcols(spec.stat_dim + 1);
    for (const Theta& t : theta_probes) {
        const std::vector<double> wv = spec.w(t);
        wcols[0].push_back(1.0);
        for (int i = 0; i < spec.stat_dim; ++i) wcols[i + 1].push_back(wv[i]);
    }
    rep.w_gram_min_eig = gram_min_eig(wcols);
    rep.w_independent = rep.w_gram_min_eig > 1e-8;

    std::vector<std::vector<double>> fcols;
    if (spec.kind == FamilyKind::BAlpha) fcols.emplace_back();
    for (int i = 0; i < spec.stat_dim; ++i) fcols.emplace_back();
    for (double x : x_probes) {
        const std::vector<double> fv = spec.f(x);
        std::size_t c = 0;
        if (spec.kind == FamilyKind::BAlpha) fcols[c++].push_back(1.0);
        for (int i = 0; i < spec.stat_dim; ++i) fcols[c + i].push_back(fv[i]);
    }
    rep.f_gram_min_eig = gram_min_eig(fcols);
    rep.f_independent = rep.f_gram_min_eig > 1e-8;

    rep.regular = rep.support_theta_free && rep.w_independent &&
                  rep.f_independent && spec.theta_dim == spec.stat_dim;
    return rep;
}

double b_alpha(double alpha) { return (1.0 - alpha) / (1.0 + alpha); }

double student_alpha(double nu) { return (nu - 1.0) / (nu + 1.0); }

double student_norm_const(double nu, double sigma) {
    return std::tgamma((nu + 1.0) / 2.0) /
           (std::tgamma(nu / 2.0) * std::sqrt(nu * M_PI) * sigma);
}

std::pair<FamilySpec, Theta> bernoulli_as_m2(double theta) {
    FamilySpec s;
    s.name = "bernoulli_m2";
    s.kind = FamilyKind::MAlpha;
    s.alpha = 2.0;
    s.theta_dim = 1;
    s.stat_dim = 1;
    s.h = [](double) { return 1.0; };
    s.w = [](const Theta& t) {
        return std::vector<double>{(2.0 * t[0] - 1.0) / (1.0 - t[0])};
    };
    s.f = [](double x) { return std::vector<double>{x}; };
    s.f1 = [](double x) { return x; };
    s.support = Support::points({0.0, 1.0});
    s.box = {{0.0, 1.0}};
    s.closed_form_normalizer = [](const Theta& t) { return 1.0 - t[0]; };
    return {s, {theta}};
}

std::pair<FamilySpec, Theta> bernoulli_exponential(double theta) {
    FamilySpec s;
    s.name = "bernoulli_exponential";
    s.kind = FamilyKind::Exponential;
    s.alpha = 1.0;
    s.theta_dim = 1;
    s.stat_dim = 1;
    s.h = [](double) { return 0.0; };
    s.w = [](const Theta& t) {
        return std::vector<double>{std::log(t[0] / (1.0 - t[0]))};
    };
    s.f = [](double x) { return std::vector<double>{x}; };
    s.f1 = [](double x) { return x; };
    s.support = Support::points({0.0, 1.0});
    s.box = {{0.0, 1.0}};
    s.closed_form_normalizer = [](const Theta& t) { return 1.0 / (1.0 - t[0]); };
    return {s, {theta}};
}

std::pair<FamilySpec, Theta> binomial_exponential(int m, double theta) {
    FamilySpec s;
    s.name = "binomial" + std::to_string(m) + "_exponential";
    s.kind = FamilyKind::Exponential;
    s.alpha = 1.0;
    s.theta_dim = 1;
    s.stat_dim = 1;
    s.h = [m](double x) {
        // log binomial coefficient
        return std::lgamma(m + 1.0) - std::lgamma(x + 1.0) -
               std::lgamma(m - x + 1.0);
    };
    s.w = [](const Theta& t) {
        return std::vector<double>{std::log(t[0] / (1.0 - t[0]))};
    };
    s.f = [](double x) { return std::vector<double>{x}; };
    s.f1 = [](double x) { return x; };
    std::vector<double> atoms;
    for (int i = 0; i <= m; ++i) atoms.push_back(static_cast<double>(i));
    s.support = Support::points(atoms);
    s.box = {{0.0, 1.0}};
    s.closed_form_normalizer = [m](const Theta& t) {
        return std::pow(1.0 - t[0], -static_cast<double>(m));
    };
    return {s, {theta}};
}

std::pair<FamilySpec, Theta> bernoulli_as_b2(double theta) {
    FamilySpec s;
    s.name = "bernoulli_b2";
    s.kind = FamilyKind::BAlpha;
    s.alpha = 2.0;
    s.theta_dim = 1;
    s.stat_dim = 1;
    s.h = [](double) { return 0.0; };
    s.F = [](const Theta& t) { return 1.0 - t[0]; };
    s.w = [](const Theta& t) { return std::vector<double>{2.0 * t[0] - 1.0}; };
    s.f = [](double x) { return std::vector<double>{x}; };
    s.f1 = [](double x) { return x; };
    s.support = Support::points({0.0, 1.0});
    s.box = {{0.0, 1.0}};
    return {s, {theta}};
}

std::pair<FamilySpec, Theta> student_as_m_alpha(double nu, double mu,
                                                double sigma2) {
    if (!(nu > 2.0)) throw ValidityViolated("student_as_m_alpha: need nu > 2");
    FamilySpec s;
    s.name = "student_m_alpha_nu" + std::to_string(nu);
    s.kind = FamilyKind::MAlpha;
    s.alpha = student_alpha(nu);
    s.theta_dim = 2;
    s.stat_dim = 2;
    const double b = b_alpha(s.alpha);  // = 1/nu
    s.h = [](double) { return 1.0; };
    s.w = [b](const Theta& t) {
        const double mu_ = t[0], s2 = t[1];
        const double d = s2 + b * mu_ * mu_;
        return std::vector<double>{b / d, -2.0 * mu_ * b / d};
    };
    s.f = [](double x) { return std::vector<double>{x * x, x}; };
    s.support = Support::interval(-num::kInf, num::kInf);
    s.box = {{-50.0, 50.0}, {1e-6, 1e4}};
    const double alpha = s.alpha;
    s.closed_form_normalizer = [nu, b, alpha](const Theta& t) {
        const double mu_ = t[0], s2 = t[1];
        return student_norm_const(nu, std::sqrt(s2)) *
               std::pow(1.0 + mu_ * mu_ * b / s2, 1.0 / (alpha - 1.0));
    };
    return {s, {mu, sigma2}};
}

std::pair<FamilySpec, Theta> student_scale_m_alpha(double nu, double sigma2) {
    if (!(nu > 2.0)) throw ValidityViolated("student_scale_m_alpha: nu > 2");
    FamilySpec s;
    s.name = "student_scale_m_alpha_nu" + std::to_string(nu);
    s.kind = FamilyKind::MAlpha;
    s.alpha = student_alpha(nu);
    s.theta_dim = 1;
    s.stat_dim = 1;
    const double b = b_alpha(s.alpha);
    s.h = [](double) { return 1.0; };
    s.w = [b](const Theta& t) { return std::vector<double>{b / t[0]}; };
    s.f = [](double x) { return std::vector<double>{x * x}; };
    s.f1 = [](double x) { return x * x; };
    s.support = Support::interval(-num::kInf, num::kInf);
    s.box = {{1e-6, 1e4}};
    s.closed_form_normalizer = [nu](const Theta& t) {
        return student_norm_const(nu, std::sqrt(t[0]));
    };
    return {s, {sigma2}};
}

std::pair<FamilySpec, Theta> student_location_m_alpha(double nu, double mu) {
    auto [full, theta] = student_as_m_alpha(nu, mu, 1.0);
    FamilySpec s = full;
    s.name = "student_location_m_alpha_nu" + std::to_string(nu);
    s.theta_dim = 1;  // sigma^2 pinned to 1; statistic stays 2-dimensional
    auto w_full = full.w;
    s.w = [w_full](const Theta& t) { return w_full({t[0], 1.0}); };
    auto z_full = full.closed_form_normalizer;
    s.closed_form_normalizer = [z_full](const Theta& t) {
        return z_full({t[0], 1.0});
    };
    s.box = {{-50.0, 50.0}};
    return {s, {mu}};
}

std::pair<FamilySpec, Theta> student_as_b_alpha(double nu, double mu) {
    if (!(nu > 2.0)) throw ValidityViolated("student_as_b_alpha: need nu > 2");
    FamilySpec s;
    s.name = "student_b_alpha_nu" + std::to_string(nu);
    s.kind = FamilyKind::BAlpha;
    s.alpha = student_alpha(nu);
    s.theta_dim = 1;
    s.stat_dim = 1;
    const double alpha = s.alpha;
    const double b = b_alpha(alpha);
    const double na = std::pow(student_norm_const(nu, 1.0), alpha - 1.0);
    s.h = [na, b](double x) { return na * b * x * x; };
    s.F = [na, b](const Theta& t) { return (1.0 + b * t[0] * t[0]) * na; };
    s.w = [na, b](const Theta& t) {
        return std::vector<double>{-2.0 * t[0] * na * b};
    };
    s.f = [](double x) { return std::vector<double>{x}; };
    s.f1 = [](double x) { return x; };
    s.support = Support::interval(-num::kInf, num::kInf);
    s.box = {{-50.0, 50.0}};
    return {s, {mu}};
}

std::pair<FamilySpec, Theta> normal_exponential(double mu) {
    FamilySpec s;
    s.name = "normal_exponential";
    s.kind = FamilyKind::Exponential;
    s.alpha = 1.0;
    s.theta_dim = 1;
    s.stat_dim = 1;
    s.h = [](double x) { return -0.5 * x * x; };
    s.w = [](const Theta& t) { return std::vector<double>{t[0]}; };
    s.f = [](double x) { return std::vector<double>{x}; };
    s.f1 = [](double x) { return x; };
    s.support = Support::interval(-num::kInf, num::kInf);
    s.box = {{-100.0, 100.0}};
    s.closed_form_normalizer = [](const Theta& t) {
        return std::sqrt(2.0 * M_PI) * std::exp(0.5 * t[0] * t[0]);
    };
    return {s, {mu}};
}

std::vector<double> sample_family(const FamilySpec& spec, const Theta& theta,
                                  int n, std::uint64_t seed) {
    check_theta_in_box(spec, theta);
    num::RngStream rng(seed, 0x73616d70ULL);
    std::vector<double> out(n);
    if (spec.name.rfind("bernoulli", 0) == 0) {
        for (double& x : out) x = rng.bernoulli(theta[0]);
        return out;
    }
    if (spec.name.rfind("binomial", 0) == 0) {
        const int m = static_cast<int>(spec.support.atoms.size()) - 1;
        for (double& x : out) x = rng.binomial(m, theta[0]);
        return out;
    }
    if (spec.name.rfind("normal", 0) == 0) {
        for (double& x : out) x = theta[0] + rng.normal();
        return out;
    }
    if (spec.name.rfind("student", 0) == 0) {
        const double nu = 2.0 / (1.0 - spec.alpha) - 1.0;
        double mu = 0.0, sigma = 1.0;
        if (spec.name.rfind("student_scale", 0) == 0) {
            sigma = std::sqrt(theta[0]);
        } else if (spec.theta_dim == 2) {
            mu = theta[0];
            sigma = std::sqrt(theta[1]);
        } else {
            mu = theta[0];
        }
        for (double& x : out) x = mu + sigma * rng.student_t(nu);
        return out;
    }
    throw Error("sample_family: no sampler for " + spec.name);
}

namespace {

std::function<double(double)> poly_from(const std::vector<double>& coeffs) {
    return [coeffs](double x) {
        double acc = 0.0, p = 1.0;
        for (double c : coeffs) {
            acc += c * p;
            p *= x;
        }
        return acc;
    };
}

}  // namespace

std::pair<FamilySpec, Theta> family_from_json(const std::string& json_text) {
    const nlohmann::json j = nlohmann::json::parse(json_text);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "student_m_alpha") {
        return student_as_m_alpha(j.at("nu").get<double>(),
                                  j.value("mu", 0.0), j.value("sigma2", 1.0));
    }
    if (kind == "student_b_alpha") {
        return student_as_b_alpha(j.at("nu").get<double>(), j.value("mu", 0.0));
    }
    if (kind == "student_scale_m_alpha") {
        return student_scale_m_alpha(j.at("nu").get<double>(),
                                     j.value("sigma2", 1.0));
    }
    if (kind == "bernoulli_m2") return bernoulli_as_m2(j.at("theta"));
    if (kind == "bernoulli_b2") return bernoulli_as_b2(j.at("theta"));
    if (kind == "bernoulli_exponential")
        return bernoulli_exponential(j.at("theta"));
    if (kind == "binomial_exponential")
        return binomial_exponential(j.at("m").get<int>(), j.at("theta"));
    if (kind == "normal_exponential") return normal_exponential(j.at("mu"));
    if (kind == "custom_m_alpha" || kind == "custom_b_alpha") {
        FamilySpec s;
        s.name = kind;
        s.kind = kind == "custom_m_alpha" ? FamilyKind::MAlpha
                                          : FamilyKind::BAlpha;
        s.alpha = j.at("alpha").get<double>();
        s.h = poly_from(j.at("h").get<std::vector<double>>());
        std::vector<std::function<double(double)>> fs;
        for (const auto& c : j.at("f"))
            fs.push_back(poly_from(c.get<std::vector<double>>()));
        s.stat_dim = static_cast<int>(fs.size());
        s.f = [fs](double x) {
            std::vector<double> out;
            out.reserve(fs.size());
            for (const auto& fn : fs) out.push_back(fn(x));
            return out;
        };
        std::vector<std::function<double(double)>> ws;
        for (const auto& c : j.at("w"))
            ws.push_back(poly_from(c.get<std::vector<double>>()));
        if (ws.size() != fs.size())
            throw Error("custom family: w and f arity mismatch");
        s.w = [ws](const Theta& t) {
            std::vector<double> out;
            out.reserve(ws.size());
            for (const auto& fn : ws) out.push_back(fn(t[0]));
            return out;
        };
        s.theta_dim = 1;
        if (s.kind == FamilyKind::BAlpha) {
            auto Fp = poly_from(j.at("F").get<std::vector<double>>());
            s.F = [Fp](const Theta& t) { return Fp(t[0]); };
        }
        const auto& sup = j.at("support");
        if (sup.is_array()) {
            s.support = Support::interval(sup[0].get<double>(),
                                          sup[1].get<double>());
        } else {
            s.support =
                Support::points(sup.at("atoms").get<std::vector<double>>());
        }
        for (const auto& bx : j.at("box"))
            s.box.emplace_back(bx[0].get<double>(), bx[1].get<double>());
        Theta theta = j.at("theta").get<std::vector<double>>();
        return {s, theta};
    }
    throw Error("family_from_json: unknown kind '" + kind + "'");
}

}  // namespace powerlaw
