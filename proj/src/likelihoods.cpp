#include "powerlaw/likelihoods.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "powerlaw/errors.hpp"

namespace powerlaw {

void EmpiricalPMF::validate() const {
    if (atoms.size() != masses.size()) {
        throw Error("EmpiricalPMF: atoms/masses size mismatch");
    }
    double s = 0.0;
    for (double m : masses) {
        if (m < 0.0) throw Error("EmpiricalPMF: negative mass");
        s += m;
    }
    if (std::abs(s - 1.0) > 1e-12) {
        throw Error("EmpiricalPMF: masses sum to " + std::to_string(s));
    }
}

EmpiricalPMF EmpiricalPMF::from_sample(const Sample& sample,
                                       const std::vector<double>& atoms) {
    EmpiricalPMF p;
    p.atoms = atoms;
    p.masses.assign(atoms.size(), 0.0);
    for (double x : sample) {
        bool hit = false;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (std::abs(x - atoms[i]) < 1e-12) {
                p.masses[i] += 1.0 / sample.size();
                hit = true;
                break;
            }
        }
        if (!hit) throw Error("EmpiricalPMF: sample value off the atom grid");
    }
    return p;
}

double log_likelihood(const FamilySpec& spec, const Theta& theta,
                      const Sample& sample) {
    double acc = 0.0;
    for (double x : sample) {
        const double p = density(spec, theta, x);
        if (p <= 0.0) {
            throw ZeroDensityAtSample(spec.name + ": zero density at x=" +
                                      std::to_string(x));
        }
        acc += std::log(p);
    }
    return acc;
}

namespace {

struct NormCacheKey {
    const FamilySpec* spec;
    std::vector<double> theta;
    double alpha;
    bool operator<(const NormCacheKey& o) const {
        return std::tie(spec, theta, alpha) <
               std::tie(o.spec, o.theta, o.alpha);
    }
};

// int p^alpha, memoized: the quantity is sample-independent but sits inside
// every Jones/Basu evaluation in enumeration loops.
double p_alpha_mass(const FamilySpec& spec, const Theta& theta, double alpha) {
    static std::map<NormCacheKey, double> cache;
    static std::mutex mtx;
    NormCacheKey key{&spec, theta, alpha};
    {
        std::lock_guard<std::mutex> lk(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    double value;
    if (spec.support.finite) {
        value = 0.0;
        for (double a : spec.support.atoms) {
            value += std::pow(density(spec, theta, a), alpha);
        }
    } else {
        auto f = [&](double x) {
            const double p = density(spec, theta, x);
            return p > 0.0 ? std::pow(p, alpha) : 0.0;
        };
        num::QuadratureResult q =
            num::integrate(f, spec.support.lo, spec.support.hi, 1e-10);
        if (!q.converged || !std::isfinite(q.value)) {
            throw DivergentNorm(spec.name + ": int p^alpha diverges at alpha=" +
                                std::to_string(alpha));
        }
        value = q.value;
    }
    std::lock_guard<std::mutex> lk(mtx);
    cache[key] = value;
    return value;
}

}  // namespace

double integral_p_alpha(const FamilySpec& spec, const Theta& theta,
                        double alpha) {
    return p_alpha_mass(spec, theta, alpha);
}

double lp_norm(const FamilySpec& spec, const Theta& theta, double alpha) {
    return std::pow(p_alpha_mass(spec, theta, alpha), 1.0 / alpha);
}

double jones_likelihood(const FamilySpec& spec, const Theta& theta,
                        const Sample& sample, double alpha) {
    if (alpha <= 0.0 || alpha == 1.0) {
        throw Error("jones_likelihood: alpha must be positive and != 1");
    }
    double avg = 0.0;
    for (double x : sample) {
        const double p = density(spec, theta, x);
        if (p <= 0.0) {
            throw ZeroDensityAtSample(spec.name + ": zero density at x=" +
                                      std::to_string(x));
        }
        avg += std::pow(p, alpha - 1.0);
    }
    avg /= sample.size();
    return std::log(avg) / (alpha - 1.0) - std::log(lp_norm(spec, theta, alpha));
}

double basu_likelihood(const FamilySpec& spec, const Theta& theta,
                       const Sample& sample, double alpha) {
    if (alpha <= 0.0 || alpha == 1.0) {
        throw Error("basu_likelihood: alpha must be positive and != 1");
    }
    double emp = 0.0;
    for (double x : sample) {
        const double p = density(spec, theta, x);
        emp += (alpha * std::pow(p, alpha - 1.0) - 1.0) / (alpha - 1.0);
    }
    emp /= sample.size();
    return emp - p_alpha_mass(spec, theta, alpha);
}

double cauchy_schwarz_likelihood(const EmpiricalPMF& empirical,
                                 const FamilySpec& spec, const Theta& theta) {
    empirical.validate();
    if (!spec.support.finite) {
        throw Error("cauchy_schwarz_likelihood: finite support required");
    }
    double cross = 0.0, self = 0.0;
    for (std::size_t i = 0; i < empirical.atoms.size(); ++i) {
        const double p = density(spec, theta, empirical.atoms[i]);
        cross += empirical.masses[i] * p;
        self += p * p;
    }
    return std::log(cross / self);
}

double generalized_likelihood(const LikelihoodKind& kind,
                              const FamilySpec& spec, const Theta& theta,
                              const Sample& sample) {
    switch (kind.name) {
        case LikelihoodName::Log:
            return log_likelihood(spec, theta, sample);
        case LikelihoodName::Jones:
            return jones_likelihood(spec, theta, sample, kind.alpha);
        case LikelihoodName::Basu:
            return basu_likelihood(spec, theta, sample, kind.alpha);
        case LikelihoodName::CauchySchwarz: {
            EmpiricalPMF p =
                EmpiricalPMF::from_sample(sample, spec.support.atoms);
            return cauchy_schwarz_likelihood(p, spec, theta);
        }
    }
    throw Error("generalized_likelihood: unreachable");
}

}  // namespace powerlaw
