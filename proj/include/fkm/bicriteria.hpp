#ifndef FKM_BICRITERIA_HPP
#define FKM_BICRITERIA_HPP

#include <cstdint>
#include <vector>

#include "fkm/dataset.hpp"

namespace fkm {

struct BicriteriaOptions {
    /// Cost inflation assumed for the returned solution; feeds the downstream
    /// radius and sample-size formulas.
    double alpha = 16.0;
    /// Center inflation: up to beta*K centers are sampled.
    double beta = 2.0;
};

/// An over-seeded K-means solution: at most beta*K centers with cost assumed
/// within alpha of the optimal K-means cost.
struct BicriteriaSolution {
    MeansSolution centers;
    double alpha = 16.0;
    double beta = 2.0;
    double cost = 0.0;  // kmeans_cost(X, centers)
};

/// Nearest-center assignment; ties go to the lowest center index.
struct InducedPartition {
    std::vector<uint32_t> assignment;
    std::size_t cell_count = 0;
};

/// Sequential D^2 over-seeding: beta*K centers drawn proportional to the
/// current weighted squared distance, repeated ceil(log2(3/delta)) times with
/// the cheapest run kept. Deterministic for a fixed seed.
BicriteriaSolution bicriteria_kmeans(const WeightedDataset& x, uint32_t k,
                                     double delta, uint64_t seed,
                                     const BicriteriaOptions& opts = {});

InducedPartition induce_partition(const WeightedDataset& x,
                                  const BicriteriaSolution& solution);

}  // namespace fkm

#endif
