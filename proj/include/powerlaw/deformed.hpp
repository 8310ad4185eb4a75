#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "powerlaw/likelihoods.hpp"

namespace powerlaw {

// A statistic with an equality-classing quantum so continuous values can be
// bucketed during enumeration. Shipped constructors are permutation-symmetric.
struct StatisticFn {
    std::string name;
    int arity = 1;
    std::function<std::vector<double>(const Sample&)> eval;
    double quantum = 1e-9;

    std::vector<long long> bucket(const Sample& sample) const;
};

StatisticFn stat_mean_f_over_mean_h(const FamilySpec& spec);  // f-bar / h-bar
StatisticFn stat_mean_f(const FamilySpec& spec);              // f-bar
StatisticFn stat_sum(int index = 0);  // sum of x (or of f_index)
StatisticFn stat_identity(int n);     // the whole sample, bucketed per-coord

// Canonical sufficient statistic: f-bar/h-bar for MAlpha, f-bar otherwise.
StatisticFn canonical_sufficient_statistic(const FamilySpec& spec);

// The n-sample deformed distribution p*_theta = exp[L]/normalizer for a
// chosen likelihood. Exact on finite (enumerable) spaces; continuous spaces
// are supported for n <= 3 through tensorized quadrature.
class DeformedJoint {
  public:
    DeformedJoint(FamilySpec spec, LikelihoodKind likelihood, int n);

    const FamilySpec& spec() const { return spec_; }
    const LikelihoodKind& likelihood() const { return likelihood_; }
    int n() const { return n_; }
    bool finite() const { return spec_.support.finite; }

    // Enumerated finite space (throws for continuous support).
    const num::GridSpace& space() const;

    double deformed_density(const Theta& theta, const Sample& sample) const;
    double deformed_normalizer(const Theta& theta) const;

    // All state weights p*(x) in enumeration order (finite spaces).
    const std::vector<double>& weights(const Theta& theta) const;

    double expectation(const Theta& theta,
                       const std::function<double(const Sample&)>& g) const;

  private:
    double raw_normalizer(const Theta& theta) const;
    void check_continuous_integrable() const;

    FamilySpec spec_;
    LikelihoodKind likelihood_;
    int n_;
    std::unique_ptr<num::GridSpace> space_;
    mutable std::map<std::vector<double>, double> norm_cache_;
    mutable std::map<std::vector<double>, std::vector<double>> weight_cache_;
};

struct ConditionalSlice {
    std::vector<long long> bucket;
    std::vector<std::size_t> member_indices;  // into the enumerated space
    std::vector<double> weights;              // sum to 1
};

// Exact conditional p*(x | T(x) = t) on finite spaces.
ConditionalSlice deformed_conditional(const DeformedJoint& dj,
                                      const StatisticFn& T, const Theta& theta,
                                      const Sample& representative);

// q*(t): the deformed mass of the bucket containing `representative`.
double deformed_marginal_q(const DeformedJoint& dj, const StatisticFn& T,
                           const Theta& theta, const Sample& representative);

// All buckets of T over the enumerated space, with member indices.
std::map<std::vector<long long>, std::vector<std::size_t>> bucketize(
    const DeformedJoint& dj, const StatisticFn& T);

}  // namespace powerlaw
