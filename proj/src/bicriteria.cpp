#include "fkm/bicriteria.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fkm/common.hpp"
#include "fkm/fuzzy.hpp"

namespace fkm {

namespace {

struct SeedingRun {
    MeansSolution centers;
    double cost = std::numeric_limits<double>::infinity();
};

SeedingRun d2_seeding(const WeightedDataset& x, std::size_t target, Rng& rng) {
    const std::size_t n = x.size();
    SeedingRun run;
    std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());

    // First center: weighted-uniform draw.
    {
        const uint64_t pick = rng.below(x.total_weight());
        uint64_t cumulative = 0;
        std::size_t chosen = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            cumulative += x.weight(i);
            if (pick < cumulative) {
                chosen = i;
                break;
            }
        }
        run.centers.append(x.point(chosen));
    }

    while (run.centers.count() < target) {
        const auto last = run.centers.mean(run.centers.count() - 1);
        double total_mass = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            min_d2[i] = std::min(min_d2[i], squared_distance(x.point(i), last));
            total_mass += static_cast<double>(x.weight(i)) * min_d2[i];
        }
        if (total_mass <= 0.0) break;  // only duplicates of chosen centers left
        const double pick = rng.uniform() * total_mass;
        double cumulative = 0.0;
        std::size_t chosen = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            cumulative += static_cast<double>(x.weight(i)) * min_d2[i];
            if (pick < cumulative) {
                chosen = i;
                break;
            }
        }
        run.centers.append(x.point(chosen));
    }

    run.cost = kmeans_cost(x, run.centers);
    return run;
}

}  // namespace

BicriteriaSolution bicriteria_kmeans(const WeightedDataset& x, uint32_t k,
                                     double delta, uint64_t seed,
                                     const BicriteriaOptions& opts) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    if (delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("delta must be in (0,1)");
    if (opts.alpha < 1.0 || opts.beta < 1.0)
        throw std::invalid_argument("alpha and beta must be >= 1");

    const std::size_t target = static_cast<std::size_t>(
        std::ceil(opts.beta * static_cast<double>(k)));
    const uint32_t runs = static_cast<uint32_t>(
        std::max(1.0, std::ceil(std::log2(3.0 / delta))));

    SeedingRun best;
    for (uint32_t r = 0; r < runs; ++r) {
        Rng rng(mix_seed(seed, 0xB1C0u, r));
        SeedingRun run = d2_seeding(x, target, rng);
        if (run.cost < best.cost || best.centers.count() == 0) best = std::move(run);
        if (best.cost == 0.0) break;
    }

    BicriteriaSolution out;
    out.centers = std::move(best.centers);
    out.alpha = opts.alpha;
    out.beta = opts.beta;
    out.cost = best.cost;
    return out;
}

InducedPartition induce_partition(const WeightedDataset& x,
                                  const BicriteriaSolution& solution) {
    const auto& centers = solution.centers;
    if (centers.count() == 0) throw std::invalid_argument("no centers");
    if (centers.dim() != x.dim())
        throw std::invalid_argument("center dimension does not match dataset");
    InducedPartition partition;
    partition.cell_count = centers.count();
    partition.assignment.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto p = x.point(i);
        double best = std::numeric_limits<double>::infinity();
        uint32_t arg = 0;
        for (std::size_t c = 0; c < centers.count(); ++c) {
            const double d2 = squared_distance(p, centers.mean(c));
            if (d2 < best) {
                best = d2;
                arg = static_cast<uint32_t>(c);
            }
        }
        partition.assignment[i] = arg;
    }
    return partition;
}

}  // namespace fkm
