#ifndef FKM_CORESET_HPP
#define FKM_CORESET_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fkm/bicriteria.hpp"
#include "fkm/dataset.hpp"

namespace fkm {

/// Dyadic annuli around each center: cell (k, j) holds the indices assigned
/// to center k whose distance lies in (2^(j-1) R, 2^j R], with j = 0 the ball
/// of radius R. Cells partition the dataset indices.
struct RingPartition {
    uint32_t ring_levels = 0;  // F: rings run j = 0..F
    double base_radius = 0.0;  // R
    std::size_t center_count = 0;
    std::vector<std::vector<uint32_t>> cells;  // indexed k * (F + 1) + j

    const std::vector<uint32_t>& cell(std::size_t k, std::size_t j) const {
        return cells[k * (ring_levels + 1) + j];
    }
};

/// Weighted subset of a source dataset. Weights are positive integers that
/// sum to the source's total weight.
struct Coreset {
    std::size_t dim = 0;
    std::vector<double> points;       // row-major
    std::vector<uint64_t> weights;
    uint64_t source_total = 0;
    /// Indices into the source dataset; empty after merges.
    std::vector<uint64_t> source_index;

    std::size_t size() const { return weights.size(); }
    std::span<const double> point(std::size_t i) const {
        return {points.data() + i * dim, dim};
    }
    void append(std::span<const double> p, uint64_t weight);
    uint64_t weight_sum() const;
    WeightedDataset as_dataset() const;
};

RingPartition build_rings(const WeightedDataset& x, const BicriteriaSolution& a,
                          const InducedPartition& partition, double alpha);

/// epsilon / (a * alpha * K^(m-1)): the tightened accuracy handed to the ring
/// sampler.
double epsilon_tilde(double epsilon, double alpha, uint32_t k, double m,
                     double const_a);

/// Natural log of the candidate-grid size
///   gamma = beta*K * (log2(b*alpha*N / (eps_tilde^2 * (eps/(4mK^2))^m))/2 + 1)
///           * (c/eps_tilde)^D,
/// returned as ln(gamma) since gamma^K only ever appears inside a logarithm.
double log_gamma(double alpha, double beta, uint32_t k, double m, double n,
                 std::size_t dim, double epsilon, double eps_tilde,
                 double const_b, double const_c);

/// Per-cell sample count:
///   ceil(q * (alpha*K^(m-1)/eps)^2 * (ln(4*beta*K*F/delta) + K*ln(gamma))),
/// at least 1. eps here is the accuracy handed to the sampler (eps_tilde when
/// called from the fuzzy pipeline).
uint64_t sample_size_q(double alpha, double beta, uint32_t k, double m,
                       double eps_run, double delta, uint32_t ring_levels,
                       double log_gamma_value, double const_q);

/// Largest-remainder rounding of rationals numerators[i]/denominator to
/// integers preserving the exact total. Ties break toward lower indices. If
/// the total is below the entry count, the smallest entries are merged first
/// (cannot happen in the sampling pipeline).
std::vector<uint64_t> round_cell_weights(std::span<const uint64_t> numerators,
                                         uint64_t denominator);

/// Per-cell sampling: q draws with replacement proportional to point weight
/// (uniform for unit weights), raw weight cellmass/q per draw, rounded per
/// cell. Cells with at most q points are taken whole with their original
/// weights. Cell RNG streams derive from (seed, k, j).
Coreset ring_sampling(const WeightedDataset& x, const RingPartition& rings,
                       uint64_t q, uint64_t seed);

/// Diagnostics of one end-to-end construction.
struct CoresetBuild {
    Coreset coreset;
    BicriteriaSolution bicriteria;
    double eps_tilde = 0.0;
    double log_gamma_value = 0.0;
    uint32_t ring_levels = 0;
    uint64_t q = 0;
    std::size_t nonempty_cells = 0;
};

/// Full pipeline: bicriteria seeding at delta/3, the eps_tilde/gamma/q
/// formulas, rings, and per-cell sampling at (eps_tilde, delta/3). The
/// dataset's total weight takes the role of the point count, so integer
/// weighted inputs behave as their copy expansions.
CoresetBuild build_fuzzy_coreset(const WeightedDataset& x, const FuzzyParams& params,
                                 uint64_t seed, const BicriteriaOptions& opts = {});

Coreset fuzzy_coreset(const WeightedDataset& x, const FuzzyParams& params,
                      uint64_t seed, const BicriteriaOptions& opts = {});

/// Entry point for already-weighted data; identical pipeline, documented
/// separately because the weighted behavior is what it exists for.
Coreset coreset_from_weighted(const WeightedDataset& x, const FuzzyParams& params,
                              uint64_t seed, const BicriteriaOptions& opts = {});

}  // namespace fkm

#endif
