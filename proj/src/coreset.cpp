#include "fkm/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "fkm/common.hpp"
#include "fkm/fuzzy.hpp"

namespace fkm {

void Coreset::append(std::span<const double> p, uint64_t weight) {
    points.insert(points.end(), p.begin(), p.end());
    weights.push_back(weight);
}

uint64_t Coreset::weight_sum() const {
    uint64_t total = 0;
    for (uint64_t w : weights) total += w;
    return total;
}

WeightedDataset Coreset::as_dataset() const {
    return WeightedDataset(points, dim, weights);
}

RingPartition build_rings(const WeightedDataset& x, const BicriteriaSolution& a,
                          const InducedPartition& partition, double alpha) {
    if (partition.assignment.size() != x.size())
        throw std::invalid_argument("partition does not match dataset");
    if (partition.cell_count != a.centers.count())
        throw std::invalid_argument("partition does not match centers");
    const double total_weight = static_cast<double>(x.total_weight());

    // K-means cost through the assignment; equals kmeans_cost(x, centers).
    double km = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        km += static_cast<double>(x.weight(i)) *
              squared_distance(x.point(i),
                               a.centers.mean(partition.assignment[i]));

    RingPartition rings;
    rings.center_count = a.centers.count();
    rings.ring_levels = static_cast<uint32_t>(
        std::max(0.0, std::ceil(0.5 * std::log2(alpha * total_weight))));
    rings.base_radius = km > 0.0 ? std::sqrt(km / (alpha * total_weight)) : 0.0;
    rings.cells.assign(rings.center_count * (rings.ring_levels + 1), {});

    const double radius = rings.base_radius;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const uint32_t k = partition.assignment[i];
        const double d = std::sqrt(
            squared_distance(x.point(i), a.centers.mean(k)));
        uint32_t j = 0;
        if (radius > 0.0 && d > radius) {
            double level = std::ceil(std::log2(d / radius));
            j = static_cast<uint32_t>(std::max(1.0, level));
            // ldexp scales by powers of two exactly; nudge j so the ring
            // inequalities hold in floating point.
            while (j > 0 && d <= std::ldexp(radius, static_cast<int>(j) - 1)) --j;
            while (j < rings.ring_levels &&
                   d > std::ldexp(radius, static_cast<int>(j)))
                ++j;
        }
        rings.cells[k * (rings.ring_levels + 1) + j].push_back(
            static_cast<uint32_t>(i));
    }
    return rings;
}

double epsilon_tilde(double epsilon, double alpha, uint32_t k, double m,
                     double const_a) {
    if (epsilon <= 0.0 || alpha <= 0.0 || k == 0 || const_a <= 0.0)
        throw std::invalid_argument("epsilon_tilde inputs must be positive");
    return epsilon /
           (const_a * alpha * std::pow(static_cast<double>(k), m - 1.0));
}

double log_gamma(double alpha, double beta, uint32_t k, double m, double n,
                 std::size_t dim, double epsilon, double eps_tilde,
                 double const_b, double const_c) {
    if (alpha <= 0.0 || beta <= 0.0 || k == 0 || n <= 0.0 || dim == 0 ||
        epsilon <= 0.0 || eps_tilde <= 0.0 || const_b <= 0.0 || const_c <= 0.0)
        throw std::invalid_argument("log_gamma inputs must be positive");
    if (eps_tilde >= const_c)
        throw std::invalid_argument("eps_tilde must be below const_c");
    const double negligible =
        epsilon / (4.0 * m * static_cast<double>(k) * static_cast<double>(k));
    const double inner =
        const_b * alpha * n / (eps_tilde * eps_tilde * std::pow(negligible, m));
    if (inner < 1.0)
        throw std::invalid_argument(
            "inconsistent constants: inner log argument below 1");
    const double bracket = 0.5 * std::log2(inner) + 1.0;
    return std::log(beta * static_cast<double>(k)) + std::log(bracket) +
           static_cast<double>(dim) * std::log(const_c / eps_tilde);
}

uint64_t sample_size_q(double alpha, double beta, uint32_t k, double m,
                       double eps_run, double delta, uint32_t ring_levels,
                       double log_gamma_value, double const_q) {
    if (alpha <= 0.0 || beta <= 0.0 || k == 0 || eps_run <= 0.0 ||
        delta <= 0.0 || const_q <= 0.0)
        throw std::invalid_argument("sample_size_q inputs must be positive");
    const double lead =
        alpha * std::pow(static_cast<double>(k), m - 1.0) / eps_run;
    const double levels = std::max<uint32_t>(ring_levels, 1);
    const double log_term =
        std::log(4.0 * beta * static_cast<double>(k) * levels / delta) +
        static_cast<double>(k) * log_gamma_value;
    const double q = const_q * lead * lead * log_term;
    if (!(q >= 1.0)) return 1;
    if (q >= 9e18) return static_cast<uint64_t>(9e18);
    return static_cast<uint64_t>(std::ceil(q));
}

std::vector<uint64_t> round_cell_weights(std::span<const uint64_t> numerators,
                                         uint64_t denominator) {
    if (denominator == 0) throw std::invalid_argument("zero denominator");
    uint64_t numerator_sum = 0;
    for (uint64_t v : numerators) {
        if (v == 0) throw std::invalid_argument("raw weights must be positive");
        numerator_sum += v;
    }
    if (numerator_sum % denominator != 0)
        throw std::invalid_argument("raw weights do not sum to an integer");
    const uint64_t total = numerator_sum / denominator;

    std::vector<uint64_t> nums(numerators.begin(), numerators.end());
    while (total < nums.size()) {
        // Merge the two smallest entries until the total can cover everyone.
        std::size_t lo1 = 0, lo2 = 1;
        if (nums[lo2] < nums[lo1]) std::swap(lo1, lo2);
        for (std::size_t i = 2; i < nums.size(); ++i) {
            if (nums[i] < nums[lo1]) {
                lo2 = lo1;
                lo1 = i;
            } else if (nums[i] < nums[lo2]) {
                lo2 = i;
            }
        }
        nums[std::min(lo1, lo2)] += nums[std::max(lo1, lo2)];
        nums.erase(nums.begin() + static_cast<std::ptrdiff_t>(std::max(lo1, lo2)));
    }

    std::vector<uint64_t> out(nums.size());
    std::vector<std::pair<uint64_t, std::size_t>> remainders;
    uint64_t assigned = 0;
    for (std::size_t i = 0; i < nums.size(); ++i) {
        out[i] = nums[i] / denominator;
        assigned += out[i];
        remainders.emplace_back(nums[i] % denominator, i);
    }
    uint64_t leftover = total - assigned;
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t r = 0; r < remainders.size() && leftover > 0; ++r, --leftover)
        out[remainders[r].second] += 1;
    return out;
}

Coreset ring_sampling(const WeightedDataset& x, const RingPartition& rings,
                       uint64_t q, uint64_t seed) {
    if (q == 0) throw std::invalid_argument("q must be >= 1");
    Coreset out;
    out.dim = x.dim();
    out.source_total = x.total_weight();
    for (std::size_t k = 0; k < rings.center_count; ++k) {
        for (std::size_t j = 0; j <= rings.ring_levels; ++j) {
            const auto& cell = rings.cell(k, j);
            if (cell.empty()) continue;
            if (q >= cell.size()) {
                // Exact representation dominates sampling here.
                for (uint32_t idx : cell) {
                    out.append(x.point(idx), x.weight(idx));
                    out.source_index.push_back(idx);
                }
                continue;
            }
            uint64_t cell_mass = 0;
            std::vector<uint64_t> prefix(cell.size());
            for (std::size_t c = 0; c < cell.size(); ++c) {
                cell_mass += x.weight(cell[c]);
                prefix[c] = cell_mass;
            }
            Rng rng(mix_seed(seed, 0x11A6u, k, j));
            std::vector<uint64_t> draw_count(cell.size(), 0);
            for (uint64_t draw = 0; draw < q; ++draw) {
                const uint64_t pick = rng.below(cell_mass);
                const auto it =
                    std::upper_bound(prefix.begin(), prefix.end(), pick);
                draw_count[static_cast<std::size_t>(it - prefix.begin())] += 1;
            }
            std::vector<uint64_t> numerators;
            std::vector<uint32_t> drawn;
            for (std::size_t c = 0; c < cell.size(); ++c) {
                if (draw_count[c] == 0) continue;
                numerators.push_back(draw_count[c] * cell_mass);
                drawn.push_back(cell[c]);
            }
            const std::vector<uint64_t> rounded =
                round_cell_weights(numerators, q);
            for (std::size_t c = 0; c < drawn.size(); ++c) {
                out.append(x.point(drawn[c]), rounded[c]);
                out.source_index.push_back(drawn[c]);
            }
        }
    }
    return out;
}

namespace {

/// Zero-cost instance: every point sits on a center, so the distinct points
/// with their multiplicities represent the data exactly.
Coreset distinct_points_coreset(const WeightedDataset& x) {
    Coreset out;
    out.dim = x.dim();
    out.source_total = x.total_weight();
    std::map<std::vector<double>, std::size_t> seen;
    std::vector<uint64_t> mass;
    std::vector<uint64_t> first_index;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto p = x.point(i);
        std::vector<double> key(p.begin(), p.end());
        auto [it, inserted] = seen.emplace(std::move(key), mass.size());
        if (inserted) {
            mass.push_back(x.weight(i));
            first_index.push_back(i);
        } else {
            mass[it->second] += x.weight(i);
        }
    }
    for (std::size_t c = 0; c < mass.size(); ++c) {
        out.append(x.point(first_index[c]), mass[c]);
        out.source_index.push_back(first_index[c]);
    }
    return out;
}

}  // namespace

CoresetBuild build_fuzzy_coreset(const WeightedDataset& x, const FuzzyParams& params,
                                 uint64_t seed, const BicriteriaOptions& opts) {
    params.validate();
    CoresetBuild build;
    build.bicriteria = bicriteria_kmeans(x, params.k, params.delta / 3.0,
                                         mix_seed(seed, 0xB1Cu), opts);
    if (build.bicriteria.cost <= 0.0) {
        build.coreset = distinct_points_coreset(x);
        return build;
    }
    const double total_weight = static_cast<double>(x.total_weight());
    build.eps_tilde = epsilon_tilde(params.epsilon, build.bicriteria.alpha,
                                    params.k, params.m, params.const_a);
    build.log_gamma_value =
        log_gamma(build.bicriteria.alpha, build.bicriteria.beta, params.k,
                  params.m, total_weight, x.dim(), params.epsilon,
                  build.eps_tilde, params.const_b, params.const_c);
    const InducedPartition partition = induce_partition(x, build.bicriteria);
    const RingPartition rings =
        build_rings(x, build.bicriteria, partition, build.bicriteria.alpha);
    build.ring_levels = rings.ring_levels;
    build.q = sample_size_q(build.bicriteria.alpha, build.bicriteria.beta,
                            params.k, params.m, build.eps_tilde,
                            params.delta / 3.0, rings.ring_levels,
                            build.log_gamma_value, params.const_q);
    for (const auto& cell : rings.cells)
        if (!cell.empty()) ++build.nonempty_cells;
    build.coreset = ring_sampling(x, rings, build.q, mix_seed(seed, 0x5A3Bu));
    return build;
}

Coreset fuzzy_coreset(const WeightedDataset& x, const FuzzyParams& params,
                      uint64_t seed, const BicriteriaOptions& opts) {
    return build_fuzzy_coreset(x, params, seed, opts).coreset;
}

Coreset coreset_from_weighted(const WeightedDataset& x, const FuzzyParams& params,
                              uint64_t seed, const BicriteriaOptions& opts) {
    return build_fuzzy_coreset(x, params, seed, opts).coreset;
}

}  // namespace fkm
