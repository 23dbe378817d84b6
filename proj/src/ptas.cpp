#include "fkm/ptas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "fkm/common.hpp"
#include "fkm/fuzzy.hpp"

namespace fkm {

namespace {

/// C(n + t - 1, t) with saturation.
long double multiset_count(std::size_t n, uint32_t t) {
    long double count = 1.0L;
    for (uint32_t j = 1; j <= t; ++j) {
        count *= static_cast<long double>(n - 1 + j) / static_cast<long double>(j);
        if (count > 1e30L) return 1e30L;
    }
    return count;
}

long double choose(std::size_t n, uint32_t k) {
    if (k > n) return 0.0L;
    long double count = 1.0L;
    for (uint32_t j = 1; j <= k; ++j) {
        count *= static_cast<long double>(n - k + j) / static_cast<long double>(j);
        if (count > 1e30L) return 1e30L;
    }
    return count;
}

}  // namespace

CandidateMeansPool enumerate_candidates(const WeightedDataset& x, uint32_t t,
                                        uint64_t budget) {
    if (t == 0) throw std::invalid_argument("sample size t must be >= 1");
    const long double count = multiset_count(x.size(), t);
    if (count > static_cast<long double>(budget))
        throw infeasible_error(
            "candidate enumeration needs " +
            std::to_string(static_cast<double>(count)) +
            " multisets, over the budget of " + std::to_string(budget));

    CandidateMeansPool pool;
    pool.sample_size = t;
    pool.dim = x.dim();

    // Non-decreasing index tuples in lexicographic order, with running sums.
    std::vector<std::size_t> tuple(t, 0);
    std::vector<std::vector<double>> partial(t + 1);
    partial[0].assign(x.dim(), 0.0);
    std::map<std::vector<double>, bool> seen;

    const auto extend = [&](std::size_t level) {
        partial[level + 1] = partial[level];
        const auto p = x.point(tuple[level]);
        for (std::size_t d = 0; d < x.dim(); ++d) partial[level + 1][d] += p[d];
    };

    std::size_t level = 0;
    for (;;) {
        while (level < t) {
            extend(level);
            ++level;
            if (level < t) tuple[level] = tuple[level - 1];
        }
        std::vector<double> mean = partial[t];
        for (double& c : mean) c /= static_cast<double>(t);
        if (seen.emplace(mean, true).second) {
            pool.flat.insert(pool.flat.end(), mean.begin(), mean.end());
            ++pool.count;
        }
        // Advance to the next tuple.
        std::size_t back = t;
        while (back > 0 && tuple[back - 1] == x.size() - 1) --back;
        if (back == 0) break;
        level = back - 1;
        ++tuple[level];
    }
    return pool;
}

namespace {

double cost_of_subset(const WeightedDataset& x, const CandidateMeansPool& pool,
                      std::span<const std::size_t> chosen, double m) {
    std::vector<double> flat;
    flat.reserve(chosen.size() * pool.dim);
    for (std::size_t c : chosen) {
        const auto mu = pool.candidate(c);
        flat.insert(flat.end(), mu.begin(), mu.end());
    }
    return fuzzy_cost_of_means(x, MeansSolution(std::move(flat), pool.dim), m);
}

}  // namespace

MeansSolution derandomized_sampling_ptas(const WeightedDataset& x, uint32_t k,
                                         double m, double epsilon,
                                         const PtasOptions& opts) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
    const uint32_t t =
        opts.t_override != 0
            ? opts.t_override
            : static_cast<uint32_t>(std::ceil(64.0 * k / epsilon));
    const CandidateMeansPool pool = enumerate_candidates(x, t, opts.pool_budget);

    if (pool.count <= k) {
        return MeansSolution(pool.flat, pool.dim);
    }
    const long double subsets = choose(pool.count, k);
    if (subsets > static_cast<long double>(opts.eval_budget))
        throw infeasible_error(
            "argmin needs " + std::to_string(static_cast<double>(subsets)) +
            " subset evaluations, over the budget of " +
            std::to_string(opts.eval_budget));

    // Lexicographic K-combinations; strict improvement keeps the first (and
    // therefore lexicographically smallest) minimizer.
    std::vector<std::size_t> chosen(k);
    for (uint32_t i = 0; i < k; ++i) chosen[i] = i;
    std::vector<std::size_t> best_subset;
    double best_cost = std::numeric_limits<double>::infinity();
    for (;;) {
        const double cost = cost_of_subset(x, pool, chosen, m);
        if (cost < best_cost) {
            best_cost = cost;
            best_subset = chosen;
        }
        // next combination
        std::size_t i = k;
        while (i > 0 && chosen[i - 1] == pool.count - k + i - 1) --i;
        if (i == 0) break;
        ++chosen[i - 1];
        for (std::size_t j = i; j < k; ++j) chosen[j] = chosen[j - 1] + 1;
    }

    std::vector<double> flat;
    flat.reserve(best_subset.size() * pool.dim);
    for (std::size_t c : best_subset) {
        const auto mu = pool.candidate(c);
        flat.insert(flat.end(), mu.begin(), mu.end());
    }
    return MeansSolution(std::move(flat), pool.dim);
}

MeansSolution ptas_on_coreset(const WeightedDataset& x, const FuzzyParams& params,
                              uint64_t seed, const PtasOptions& opts,
                              const BicriteriaOptions& bic) {
    params.validate();
    FuzzyParams third = params;
    third.epsilon = params.epsilon / 3.0;
    const Coreset coreset = fuzzy_coreset(x, third, seed, bic);
    return derandomized_sampling_ptas(coreset.as_dataset(), params.k, params.m,
                                      third.epsilon, opts);
}

double inaba_concentration_check(const WeightedDataset& points, uint32_t n,
                                 uint32_t trials, double delta, uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample size must be >= 1");
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    if (delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("delta must be in (0,1)");
    // Unweighted throughout: the statement is about uniform draws from P.
    std::vector<double> centroid(points.dim(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto p = points.point(i);
        for (std::size_t d = 0; d < points.dim(); ++d) centroid[d] += p[d];
    }
    for (double& c : centroid) c /= static_cast<double>(points.size());
    double km = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        km += squared_distance(points.point(i),
                               {centroid.data(), centroid.size()});
    const double bound = km / (delta * static_cast<double>(n) *
                               static_cast<double>(points.size()));

    Rng rng(mix_seed(seed, 0x17ABAu));
    uint32_t successes = 0;
    std::vector<double> sample_mean(points.dim());
    for (uint32_t trial = 0; trial < trials; ++trial) {
        std::fill(sample_mean.begin(), sample_mean.end(), 0.0);
        for (uint32_t s = 0; s < n; ++s) {
            const auto p = points.point(rng.below(points.size()));
            for (std::size_t d = 0; d < points.dim(); ++d) sample_mean[d] += p[d];
        }
        for (double& c : sample_mean) c /= static_cast<double>(n);
        const double dev = squared_distance(
            {sample_mean.data(), sample_mean.size()},
            {centroid.data(), centroid.size()});
        if (dev <= bound) ++successes;
    }
    return static_cast<double>(successes) / static_cast<double>(trials);
}

}  // namespace fkm
