#pragma once

#include <vector>

#include "powerlaw/families.hpp"

namespace powerlaw {

using Sample = std::vector<double>;

struct EmpiricalPMF {
    std::vector<double> atoms;
    std::vector<double> masses;  // nonnegative, sums to 1

    void validate() const;
    static EmpiricalPMF from_sample(const Sample& sample,
                                    const std::vector<double>& atoms);
};

enum class LikelihoodName { Log, Jones, Basu, CauchySchwarz };

struct LikelihoodKind {
    LikelihoodName name = LikelihoodName::Log;
    double alpha = 2.0;  // used by Jones and Basu

    static LikelihoodKind log() { return {LikelihoodName::Log, 1.0}; }
    static LikelihoodKind jones(double a) { return {LikelihoodName::Jones, a}; }
    static LikelihoodKind basu(double a) { return {LikelihoodName::Basu, a}; }
    static LikelihoodKind cauchy_schwarz() {
        return {LikelihoodName::CauchySchwarz, 2.0};
    }
};

double log_likelihood(const FamilySpec& spec, const Theta& theta,
                      const Sample& sample);

// (1/(alpha-1)) log[(1/n) sum p^(alpha-1)] - log ||p||,
// with ||p|| = (int p^alpha)^(1/alpha).
double jones_likelihood(const FamilySpec& spec, const Theta& theta,
                        const Sample& sample, double alpha);

// (1/n) sum [(alpha p^(alpha-1) - 1)/(alpha-1)] - int p^alpha.
double basu_likelihood(const FamilySpec& spec, const Theta& theta,
                       const Sample& sample, double alpha);

// log[ sum_x p_n(x) p_theta(x) / sum_x p_theta(x)^2 ] on a finite support.
double cauchy_schwarz_likelihood(const EmpiricalPMF& empirical,
                                 const FamilySpec& spec, const Theta& theta);

// alpha-norm (int p^alpha)^(1/alpha); cached per (spec, theta, alpha).
double lp_norm(const FamilySpec& spec, const Theta& theta, double alpha);

// int p^alpha (the Basu penalty term), cached alongside lp_norm.
double integral_p_alpha(const FamilySpec& spec, const Theta& theta,
                        double alpha);

// Dispatch on LikelihoodKind (CauchySchwarz consumes the sample's empirical
// PMF over the family's finite support).
double generalized_likelihood(const LikelihoodKind& kind,
                              const FamilySpec& spec, const Theta& theta,
                              const Sample& sample);

}  // namespace powerlaw
