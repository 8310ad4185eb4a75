#pragma once

#include <optional>

#include "powerlaw/deformed.hpp"

namespace powerlaw {

enum class Verdict { Sufficient, NotSufficient, Minimal, NotMinimal, Inconclusive };

struct SufficiencyVerdict {
    Verdict verdict = Verdict::Inconclusive;
    double max_spread = 0.0;
    std::optional<std::pair<Sample, Sample>> witness_pair;
    int theta_grid_size = 0;
    int pairs_tested = 0;
};

// Tensorized grid over the box interior with a 5% margin per coordinate;
// `total` is split across coordinates (1-d: total, 2-d: 10 x total/10).
std::vector<Theta> make_theta_grid(
    const std::vector<std::pair<double, double>>& box, int total = 50);

// Produces sample pairs with equal T-buckets: bucket lookup on finite
// spaces, in-fiber rotation for (sum x, sum x^2)-type statistics on
// continuous supports (needs n >= 3).
class MatchedPairGenerator {
  public:
    MatchedPairGenerator(const FamilySpec& spec, const StatisticFn& T, int n,
                         std::uint64_t seed);
    // Next pair with T(x) = T(y), x != y; throws PairGenerationFailed once
    // the per-call attempt budget is exhausted.
    std::pair<Sample, Sample> next(int attempt_budget = 1000);

  private:
    const FamilySpec& spec_;
    const StatisticFn& T_;
    int n_;
    num::RngStream rng_;
    std::optional<num::GridSpace> space_;
    std::map<std::vector<long long>, std::vector<std::size_t>> buckets_;
};

// Spread of Delta L over the theta grid for pairs agreeing on T.
SufficiencyVerdict koopman_probe(const LikelihoodKind& L,
                                 const FamilySpec& spec, const StatisticFn& T,
                                 int n, int pair_budget,
                                 const std::vector<Theta>& theta_grid,
                                 double tol = 1e-8, std::uint64_t seed = 1);

struct FactorizationWitness {
    // u(theta, bucket): likelihood at the bucket representative
    std::function<double(const Theta&, const Sample&)> u;
    // v(x): likelihood offset of x against its representative
    std::function<double(const Sample&)> v;
    double max_residual = 0.0;
    int probes = 0;
};

// Additive split L(x; theta) = u(theta, T(x)) + v(x), built from bucket
// representatives; throws ResidualExceedsTol when T is not sufficient.
FactorizationWitness factorization_witness(const LikelihoodKind& L,
                                           const FamilySpec& spec,
                                           const StatisticFn& T, int n,
                                           const std::vector<Theta>& theta_grid,
                                           double tol = 1e-8,
                                           std::uint64_t seed = 2,
                                           int probe_count = 100);

// Searches for a pair with theta-constant Delta L but different T-buckets
// (a minimality violation); falls back on the regularity criterion when the
// search is exhausted.
SufficiencyVerdict minimality_probe(const LikelihoodKind& L,
                                    const FamilySpec& spec,
                                    const StatisticFn& T, int n,
                                    int pair_budget,
                                    const std::vector<Theta>& theta_grid,
                                    double tol = 1e-8, std::uint64_t seed = 3);

}  // namespace powerlaw
