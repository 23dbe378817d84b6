#ifndef FKM_PTAS_HPP
#define FKM_PTAS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fkm/coreset.hpp"
#include "fkm/dataset.hpp"

namespace fkm {

/// Means of every size-t multiset over the data points, deduplicated by exact
/// coordinate equality. Depends on point locations only, never on weights.
struct CandidateMeansPool {
    uint32_t sample_size = 0;  // t
    std::size_t dim = 0;
    std::size_t count = 0;
    std::vector<double> flat;

    std::span<const double> candidate(std::size_t i) const {
        return {flat.data() + i * dim, dim};
    }
};

struct PtasOptions {
    /// Overrides t = ceil(64 K / epsilon); forfeits the approximation bound.
    uint32_t t_override = 0;
    /// Cap on C(N + t - 1, t) multisets enumerated.
    uint64_t pool_budget = 10000000ULL;
    /// Cap on C(pool, K) subsets evaluated.
    uint64_t eval_budget = 10000000ULL;
};

/// Throws infeasible_error naming the multiset count when it exceeds budget.
/// Enumeration order is lexicographic over non-decreasing index tuples.
CandidateMeansPool enumerate_candidates(const WeightedDataset& x, uint32_t t,
                                        uint64_t budget);

/// Exhaustive argmin over K-subsets of the candidate pool. With the default
/// t this is a (1+epsilon)-approximation; the runtime is exponential by
/// design and only feasible at small scales.
MeansSolution derandomized_sampling_ptas(const WeightedDataset& x, uint32_t k,
                                         double m, double epsilon,
                                         const PtasOptions& opts = {});

/// Builds a coreset at epsilon/3 and runs the sampling scheme on it at
/// epsilon/3, compounding to (1+epsilon) against the full data.
MeansSolution ptas_on_coreset(const WeightedDataset& x, const FuzzyParams& params,
                              uint64_t seed, const PtasOptions& opts = {},
                              const BicriteriaOptions& bic = {});

/// Monte Carlo check of the mean-concentration bound: fraction of trials in
/// which the mean of n uniform draws lands within (1/(delta n)) * km(P)/|P|
/// squared distance of the true mean. Expected at least 1 - delta.
double inaba_concentration_check(const WeightedDataset& points, uint32_t n,
                                 uint32_t trials, double delta, uint64_t seed);

}  // namespace fkm

#endif
