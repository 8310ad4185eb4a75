#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "powerlaw/numerics.hpp"

namespace powerlaw {

using Theta = std::vector<double>;

enum class FamilyKind { Exponential, MAlpha, BAlpha };

struct Support {
    // Either a finite list of atoms or a (possibly unbounded) interval.
    bool finite = false;
    std::vector<double> atoms;
    double lo = -num::kInf;
    double hi = num::kInf;

    static Support interval(double lo, double hi) {
        Support s;
        s.lo = lo;
        s.hi = hi;
        return s;
    }
    static Support points(std::vector<double> atoms) {
        Support s;
        s.finite = true;
        s.atoms = std::move(atoms);
        return s;
    }
    bool contains(double x) const;
};

// A parametric family p_theta in one of three shapes:
//   Exponential:  exp[h(x) + w(theta)'f(x)] / Z(theta)
//   MAlpha:       Z(theta) * [h(x) + w(theta)'f(x)]^{1/(alpha-1)}
//   BAlpha:       [h(x) + F(theta) + w(theta)'f(x)]^{1/(alpha-1)}
// h, w, f are opaque callables; positivity of the bracketed base is probed
// numerically, never assumed.
struct FamilySpec {
    std::string name;
    FamilyKind kind = FamilyKind::MAlpha;
    double alpha = 2.0;
    int theta_dim = 1;
    int stat_dim = 1;
    std::function<double(double)> h;
    std::function<std::vector<double>(const Theta&)> w;
    std::function<double(double)> f1;  // convenience scalar path
    std::function<std::vector<double>(double)> f;
    std::function<double(const Theta&)> F;  // BAlpha normalizing function
    Support support;
    std::vector<std::pair<double, double>> box;  // open parameter box
    // Optional closed-form normalizer Z(theta); quadrature otherwise.
    std::function<double(const Theta&)> closed_form_normalizer;

    double base(const Theta& theta, double x) const;  // bracketed expression
};

struct RegularityReport {
    bool support_theta_free = true;
    bool w_independent = false;  // {1, w_1..w_k} numerically independent
    bool f_independent = false;  // {f_1..f_k} (plus 1 for BAlpha)
    bool regular = false;
    double w_gram_min_eig = 0.0;
    double f_gram_min_eig = 0.0;
};

void check_theta_in_box(const FamilySpec& spec, const Theta& theta);

double density(const FamilySpec& spec, const Theta& theta, double x);
double normalizer(const FamilySpec& spec, const Theta& theta);

RegularityReport regularity_check(const FamilySpec& spec,
                                  const std::vector<Theta>& theta_probes,
                                  const std::vector<double>& x_probes);

// --- shipped instances -------------------------------------------------------

// Bernoulli as a one-parameter power-law family with index 2:
// h = 1, w(t) = (2t-1)/(1-t), f(x) = x, Z(t) = 1-t.
std::pair<FamilySpec, Theta> bernoulli_as_m2(double theta);

// Bernoulli in the exponent shape: h = 0, w = logit, f(x) = x.
std::pair<FamilySpec, Theta> bernoulli_exponential(double theta);

// Binomial(m) counts with the binomial coefficient folded into h.
std::pair<FamilySpec, Theta> binomial_exponential(int m, double theta);

// Bernoulli with the normalizing function inside the base:
// h = 0, F(t) = 1-t, w(t) = 2t-1, f(x) = x, index 2.
std::pair<FamilySpec, Theta> bernoulli_as_b2(double theta);

// Student with both location and scale unknown, index (nu-1)/(nu+1).
std::pair<FamilySpec, Theta> student_as_m_alpha(double nu, double mu,
                                                double sigma2);

// Student scale family (location 0 known): h = 1, f = x^2, w = b/sigma^2.
std::pair<FamilySpec, Theta> student_scale_m_alpha(double nu, double sigma2);

// Student location family (unit scale known) kept in the MAlpha shape;
// one parameter but two statistic functions, so deliberately not regular.
std::pair<FamilySpec, Theta> student_location_m_alpha(double nu, double mu);

// Student location family at unit scale in the BAlpha shape.
std::pair<FamilySpec, Theta> student_as_b_alpha(double nu, double mu);

// Unit-variance normal with unknown mean, exponent shape.
std::pair<FamilySpec, Theta> normal_exponential(double mu);

// b = (1-alpha)/(1+alpha); equals 1/nu at the Student index.
double b_alpha(double alpha);
// alpha = (nu-1)/(nu+1)
double student_alpha(double nu);
// Student normalizing constant at scale sigma
double student_norm_const(double nu, double sigma);

// Seeded sampler for the shipped instances (inverse CDF for the finite
// families, normal/chi-squared ratio for Student).
std::vector<double> sample_family(const FamilySpec& spec, const Theta& theta,
                                  int n, std::uint64_t seed);

// Load a family from a JSON document (see README for the schema):
//   {"kind": "student_m_alpha", "nu": 3, "mu": 0.0, "sigma2": 1.0}
//   {"kind": "bernoulli_m2" | "bernoulli_exponential" | "bernoulli_b2",
//    "theta": 0.3}
//   {"kind": "binomial_exponential", "m": 2, "theta": 0.3}
//   {"kind": "custom_m_alpha" | "custom_b_alpha", "alpha": ..., "h": [c0,...],
//    "f": [[c0,...], ...], "w": [[c0,...], ...], "F": [c0,...],
//    "support": [lo, hi] | {"atoms": [...]}, "box": [[lo, hi], ...],
//    "theta": [...]}  (coefficient lists are ascending-degree polynomials)
std::pair<FamilySpec, Theta> family_from_json(const std::string& json_text);

}  // namespace powerlaw
