#include "powerlaw/sufficiency.hpp"

#include <algorithm>
#include <cmath>

#include "powerlaw/errors.hpp"

namespace powerlaw {

std::vector<Theta> make_theta_grid(
    const std::vector<std::pair<double, double>>& box, int total) {
    const int k = static_cast<int>(box.size());
    std::vector<int> counts;
    if (k == 1) {
        counts = {total};
    } else if (k == 2) {
        counts = {10, std::max(total / 10, 2)};
    } else {
        const int per = std::max(2, static_cast<int>(std::round(
                                        std::pow(double(total), 1.0 / k))));
        counts.assign(k, per);
    }
    std::vector<std::vector<double>> axes(k);
    for (int i = 0; i < k; ++i) {
        const double lo = box[i].first, hi = box[i].second;
        const double margin = 0.05 * (hi - lo);
        const double a = lo + margin, b = hi - margin;
        for (int j = 0; j < counts[i]; ++j) {
            axes[i].push_back(counts[i] == 1
                                  ? 0.5 * (a + b)
                                  : a + (b - a) * j / (counts[i] - 1));
        }
    }
    std::vector<Theta> grid;
    std::vector<int> idx(k, 0);
    for (;;) {
        Theta t(k);
        for (int i = 0; i < k; ++i) t[i] = axes[i][idx[i]];
        grid.push_back(t);
        int c = k - 1;
        while (c >= 0 && ++idx[c] == counts[c]) idx[c--] = 0;
        if (c < 0) break;
    }
    return grid;
}

MatchedPairGenerator::MatchedPairGenerator(const FamilySpec& spec,
                                           const StatisticFn& T, int n,
                                           std::uint64_t seed)
    : spec_(spec), T_(T), n_(n), rng_(seed, 0x70617273ULL) {
    if (spec.support.finite) {
        space_.emplace(spec.support.atoms, n);
        for (std::size_t i = 0; i < space_->size(); ++i) {
            buckets_[T.bucket(space_->sample_at(i))].push_back(i);
        }
    } else if (n < 3) {
        throw PairGenerationFailed(
            "continuous matched pairs need n >= 3 (fiber rotation)");
    }
}

std::pair<Sample, Sample> MatchedPairGenerator::next(int attempt_budget) {
    if (space_) {
        for (int attempt = 0; attempt < attempt_budget; ++attempt) {
            const std::size_t i =
                static_cast<std::size_t>(rng_.uniform() * space_->size());
            const Sample x = space_->sample_at(i);
            const auto& members = buckets_.at(T_.bucket(x));
            if (members.size() < 2) continue;
            const std::size_t j =
                members[static_cast<std::size_t>(rng_.uniform() *
                                                 members.size())];
            if (j == i) continue;
            return {x, space_->sample_at(j)};
        }
        throw PairGenerationFailed("no distinct bucket mate found in budget");
    }
    // Continuous: draw x, then rotate its centered part inside the sphere
    // {y: sum y = sum x, sum y^2 = sum x^2}. Needs a direction orthogonal to
    // both the all-ones vector and the centered sample.
    for (int attempt = 0; attempt < attempt_budget; ++attempt) {
        Sample x(n_);
        for (double& v : x) v = rng_.normal();
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= n_;
        std::vector<double> c(n_);
        double c_norm2 = 0.0;
        for (int i = 0; i < n_; ++i) {
            c[i] = x[i] - mean;
            c_norm2 += c[i] * c[i];
        }
        if (c_norm2 < 1e-12) continue;
        // random direction, projected off span{1, c}
        std::vector<double> u(n_);
        for (double& v : u) v = rng_.normal();
        double u_mean = 0.0, uc = 0.0;
        for (int i = 0; i < n_; ++i) u_mean += u[i];
        u_mean /= n_;
        for (int i = 0; i < n_; ++i) {
            u[i] -= u_mean;
        }
        for (int i = 0; i < n_; ++i) uc += u[i] * c[i];
        double u_norm2 = 0.0;
        for (int i = 0; i < n_; ++i) {
            u[i] -= uc / c_norm2 * c[i];
            u_norm2 += u[i] * u[i];
        }
        if (u_norm2 < 1e-12) continue;
        const double angle = rng_.uniform(0.25, 1.5);
        const double ca = std::cos(angle), sa = std::sin(angle);
        Sample y(n_);
        for (int i = 0; i < n_; ++i) {
            y[i] = mean + ca * c[i] +
                   sa * std::sqrt(c_norm2 / u_norm2) * u[i];
        }
        if (T_.bucket(x) != T_.bucket(y)) continue;  // quantization guard
        return {x, y};
    }
    throw PairGenerationFailed("fiber rotation failed to produce a pair");
}

namespace {

double pair_spread(const LikelihoodKind& L, const FamilySpec& spec,
                   const std::pair<Sample, Sample>& pr,
                   const std::vector<Theta>& grid) {
    double lo = num::kInf, hi = -num::kInf;
    for (const Theta& t : grid) {
        const double d = generalized_likelihood(L, spec, t, pr.first) -
                         generalized_likelihood(L, spec, t, pr.second);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return hi - lo;
}

}  // namespace

SufficiencyVerdict koopman_probe(const LikelihoodKind& L,
                                 const FamilySpec& spec, const StatisticFn& T,
                                 int n, int pair_budget,
                                 const std::vector<Theta>& theta_grid,
                                 double tol, std::uint64_t seed) {
    MatchedPairGenerator gen(spec, T, n, seed);
    SufficiencyVerdict v;
    v.theta_grid_size = static_cast<int>(theta_grid.size());
    for (int i = 0; i < pair_budget; ++i) {
        std::pair<Sample, Sample> pr;
        try {
            pr = gen.next();
        } catch (const PairGenerationFailed&) {
            if (v.pairs_tested == 0) throw;
            break;
        }
        ++v.pairs_tested;
        const double spread = pair_spread(L, spec, pr, theta_grid);
        v.max_spread = std::max(v.max_spread, spread);
        if (spread > tol) {
            v.verdict = Verdict::NotSufficient;
            v.witness_pair = pr;
            return v;
        }
    }
    v.verdict = Verdict::Sufficient;
    return v;
}

FactorizationWitness factorization_witness(const LikelihoodKind& L,
                                           const FamilySpec& spec,
                                           const StatisticFn& T, int n,
                                           const std::vector<Theta>& theta_grid,
                                           double tol, std::uint64_t seed,
                                           int probe_count) {
    if (!spec.support.finite) {
        throw Error("factorization_witness: finite support required");
    }
    auto space = std::make_shared<num::GridSpace>(spec.support.atoms, n);
    // representative of each bucket: lowest enumeration index
    auto reps = std::make_shared<std::map<std::vector<long long>, Sample>>();
    for (std::size_t i = 0; i < space->size(); ++i) {
        const Sample s = space->sample_at(i);
        reps->try_emplace(T.bucket(s), s);
    }
    const Theta theta0 = theta_grid[theta_grid.size() / 2];
    StatisticFn Tcopy = T;
    FamilySpec spec_copy = spec;

    FactorizationWitness w;
    w.u = [L, spec_copy, Tcopy, reps](const Theta& theta, const Sample& x) {
        return generalized_likelihood(L, spec_copy, theta,
                                      reps->at(Tcopy.bucket(x)));
    };
    w.v = [L, spec_copy, Tcopy, reps, theta0](const Sample& x) {
        return generalized_likelihood(L, spec_copy, theta0, x) -
               generalized_likelihood(L, spec_copy, theta0,
                                      reps->at(Tcopy.bucket(x)));
    };
    num::RngStream rng(seed, 0x66616374ULL);
    for (int i = 0; i < probe_count; ++i) {
        const std::size_t idx =
            static_cast<std::size_t>(rng.uniform() * space->size());
        const Sample x = space->sample_at(idx);
        const Theta& theta = theta_grid[static_cast<std::size_t>(
            rng.uniform() * theta_grid.size())];
        const double resid =
            std::abs(generalized_likelihood(L, spec_copy, theta, x) -
                     w.u(theta, x) - w.v(x));
        w.max_residual = std::max(w.max_residual, resid);
        ++w.probes;
    }
    if (w.max_residual > tol) {
        throw ResidualExceedsTol(
            "factorization residual " + std::to_string(w.max_residual) +
            " exceeds " + std::to_string(tol) + " (T not sufficient)");
    }
    return w;
}

SufficiencyVerdict minimality_probe(const LikelihoodKind& L,
                                    const FamilySpec& spec,
                                    const StatisticFn& T, int n,
                                    int pair_budget,
                                    const std::vector<Theta>& theta_grid,
                                    double tol, std::uint64_t seed) {
    SufficiencyVerdict v;
    v.theta_grid_size = static_cast<int>(theta_grid.size());
    num::RngStream rng(seed, 0x6d696e69ULL);
    // Random unconstrained pairs: theta-constant Delta L across different
    // buckets would witness a coarser sufficient reduction than T.
    std::optional<num::GridSpace> space;
    if (spec.support.finite) space.emplace(spec.support.atoms, n);
    for (int i = 0; i < pair_budget; ++i) {
        Sample x(n), y(n);
        if (space) {
            const std::size_t a =
                static_cast<std::size_t>(rng.uniform() * space->size());
            const std::size_t b =
                static_cast<std::size_t>(rng.uniform() * space->size());
            x = space->sample_at(a);
            y = space->sample_at(b);
        } else {
            for (double& t : x) t = rng.normal();
            for (double& t : y) t = rng.normal();
        }
        if (T.bucket(x) == T.bucket(y)) continue;
        ++v.pairs_tested;
        const double spread = pair_spread(L, spec, {x, y}, theta_grid);
        if (spread < tol) {
            v.verdict = Verdict::NotMinimal;
            v.witness_pair = {x, y};
            v.max_spread = spread;
            return v;
        }
    }
    // Regularity fallback: a regular family's canonical statistic is minimal.
    try {
        std::vector<double> x_probes;
        if (spec.support.finite) {
            x_probes = spec.support.atoms;
            while (x_probes.size() < static_cast<std::size_t>(spec.stat_dim + 2))
                x_probes.push_back(x_probes.back());
        } else {
            for (int i = 0; i < spec.stat_dim + 4; ++i)
                x_probes.push_back(-2.0 + 4.0 * i / (spec.stat_dim + 3));
        }
        RegularityReport rep = regularity_check(spec, theta_grid, x_probes);
        if (rep.regular) {
            v.verdict = Verdict::Minimal;
            return v;
        }
    } catch (const InsufficientProbes&) {
    }
    v.verdict = Verdict::Inconclusive;
    return v;
}

}  // namespace powerlaw
