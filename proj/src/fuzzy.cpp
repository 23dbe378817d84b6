#include "fkm/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fkm {

namespace {

double pow_membership(double r, double m) {
    if (m == 2.0) return r * r;
    return std::pow(r, m);
}

void check_dims(const WeightedDataset& x, const MeansSolution& means) {
    if (means.count() == 0) throw std::invalid_argument("means set is empty");
    if (means.dim() != x.dim())
        throw std::invalid_argument("means dimension does not match dataset");
}

void check_memberships(const WeightedDataset& x, const MeansSolution& means,
                       const MembershipMatrix& r) {
    if (r.rows() != x.size() || r.cols() != means.count())
        throw std::invalid_argument("membership matrix shape mismatch");
    r.validate();
}

void point_distances2(const WeightedDataset& x, const MeansSolution& means,
                      std::size_t i, std::vector<double>& out) {
    out.resize(means.count());
    const auto p = x.point(i);
    for (std::size_t k = 0; k < means.count(); ++k)
        out[k] = squared_distance(p, means.mean(k));
}

/// Cost of one point under its optimal memberships. With t_k = (d_min/d_k)^p,
/// p = 1/(m-1), the optimal row cost collapses to d_min * (sum_k t_k)^(1-m).
double optimal_point_cost(std::span<const double> dists2, double m) {
    double dmin = std::numeric_limits<double>::infinity();
    for (double d2 : dists2) dmin = std::min(dmin, d2);
    if (dmin == 0.0) return 0.0;
    const double p = 1.0 / (m - 1.0);
    double sum = 0.0;
    for (double d2 : dists2) sum += std::pow(dmin / d2, p);
    return dmin * std::pow(sum, 1.0 - m);
}

}  // namespace

double fuzzy_cost(const WeightedDataset& x, const MeansSolution& means,
                  const MembershipMatrix& memberships, double m) {
    check_dims(x, means);
    check_memberships(x, means, memberships);
    double total = 0.0;
    std::vector<double> d2;
    for (std::size_t i = 0; i < x.size(); ++i) {
        point_distances2(x, means, i, d2);
        double point_cost = 0.0;
        for (std::size_t k = 0; k < means.count(); ++k)
            point_cost += pow_membership(memberships(i, k), m) * d2[k];
        total += static_cast<double>(x.weight(i)) * point_cost;
    }
    return total;
}

void membership_row(std::span<const double> dists2, double m, std::span<double> out) {
    const std::size_t count = dists2.size();
    std::size_t zeros = 0;
    for (double d2 : dists2)
        if (d2 == 0.0) ++zeros;
    if (zeros > 0) {
        const double share = 1.0 / static_cast<double>(zeros);
        for (std::size_t k = 0; k < count; ++k)
            out[k] = dists2[k] == 0.0 ? share : 0.0;
        return;
    }
    double dmin = std::numeric_limits<double>::infinity();
    for (double d2 : dists2) dmin = std::min(dmin, d2);
    const double p = 1.0 / (m - 1.0);
    double sum = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = std::pow(dmin / dists2[k], p);
        sum += out[k];
    }
    for (std::size_t k = 0; k < count; ++k) out[k] /= sum;
}

MembershipMatrix optimal_memberships(const WeightedDataset& x,
                                     const MeansSolution& means, double m) {
    check_dims(x, means);
    MembershipMatrix r(x.size(), means.count());
    std::vector<double> d2;
    for (std::size_t i = 0; i < x.size(); ++i) {
        point_distances2(x, means, i, d2);
        membership_row(d2, m, r.row(i));
    }
    return r;
}

std::vector<double> weighted_centroid(const WeightedDataset& x) {
    std::vector<double> centroid(x.dim(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto p = x.point(i);
        const double w = static_cast<double>(x.weight(i));
        for (std::size_t d = 0; d < x.dim(); ++d) centroid[d] += w * p[d];
    }
    const double total = static_cast<double>(x.total_weight());
    for (double& c : centroid) c /= total;
    return centroid;
}

MeansSolution optimal_means(const WeightedDataset& x,
                            const MembershipMatrix& memberships, double m,
                            std::vector<std::size_t>* degenerate_out) {
    if (memberships.rows() != x.size())
        throw std::invalid_argument("membership matrix shape mismatch");
    memberships.validate();
    const std::size_t count = memberships.cols();
    std::vector<double> flat(count * x.dim(), 0.0);
    std::vector<double> mass(count, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto p = x.point(i);
        const double w = static_cast<double>(x.weight(i));
        for (std::size_t k = 0; k < count; ++k) {
            const double coeff = w * pow_membership(memberships(i, k), m);
            if (coeff == 0.0) continue;
            mass[k] += coeff;
            double* mu = flat.data() + k * x.dim();
            for (std::size_t d = 0; d < x.dim(); ++d) mu[d] += coeff * p[d];
        }
    }
    std::vector<double> centroid;
    if (degenerate_out != nullptr) degenerate_out->clear();
    for (std::size_t k = 0; k < count; ++k) {
        double* mu = flat.data() + k * x.dim();
        if (mass[k] > 0.0) {
            for (std::size_t d = 0; d < x.dim(); ++d) mu[d] /= mass[k];
        } else {
            // Any location is optimal for a zero-mass column; the centroid
            // keeps outputs bounded.
            if (centroid.empty()) centroid = weighted_centroid(x);
            std::copy(centroid.begin(), centroid.end(), mu);
            if (degenerate_out != nullptr) degenerate_out->push_back(k);
        }
    }
    return MeansSolution(std::move(flat), x.dim());
}

double fuzzy_cost_of_means(const WeightedDataset& x, const MeansSolution& means,
                           double m) {
    check_dims(x, means);
    double total = 0.0;
    std::vector<double> d2;
    for (std::size_t i = 0; i < x.size(); ++i) {
        point_distances2(x, means, i, d2);
        total += static_cast<double>(x.weight(i)) * optimal_point_cost(d2, m);
    }
    return total;
}

double cluster_size(const WeightedDataset& x, const MembershipMatrix& memberships,
                    double m, std::size_t k) {
    if (memberships.rows() != x.size())
        throw std::invalid_argument("membership matrix shape mismatch");
    if (k >= memberships.cols())
        throw std::out_of_range("cluster index out of range");
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        total += static_cast<double>(x.weight(i)) *
                 pow_membership(memberships(i, k), m);
    return total;
}

double cluster_cost(const WeightedDataset& x, const MeansSolution& means,
                    const MembershipMatrix& memberships, double m, std::size_t k) {
    check_dims(x, means);
    if (memberships.rows() != x.size() || memberships.cols() != means.count())
        throw std::invalid_argument("membership matrix shape mismatch");
    if (k >= means.count()) throw std::out_of_range("cluster index out of range");
    double total = 0.0;
    const auto mu = means.mean(k);
    for (std::size_t i = 0; i < x.size(); ++i)
        total += static_cast<double>(x.weight(i)) *
                 pow_membership(memberships(i, k), m) *
                 squared_distance(x.point(i), mu);
    return total;
}

double kmeans_cost(const WeightedDataset& x, const MeansSolution& means) {
    check_dims(x, means);
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto p = x.point(i);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < means.count(); ++k)
            best = std::min(best, squared_distance(p, means.mean(k)));
        total += static_cast<double>(x.weight(i)) * best;
    }
    return total;
}

double kmeans_cost_around_centroid(const WeightedDataset& x) {
    const std::vector<double> centroid = weighted_centroid(x);
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        total += static_cast<double>(x.weight(i)) *
                 squared_distance(x.point(i), {centroid.data(), centroid.size()});
    return total;
}

FmResult fm_algorithm(const WeightedDataset& x, uint32_t k, double m,
                      const MeansSolution& init, uint32_t max_iters, double tol) {
    if (init.count() != k)
        throw std::invalid_argument("initial means count does not match k");
    check_dims(x, init);
    FmResult result;
    result.means = init;
    result.memberships = optimal_memberships(x, result.means, m);
    double cost = fuzzy_cost(x, result.means, result.memberships, m);
    result.trace.push_back(cost);
    for (uint32_t it = 0; it < max_iters; ++it) {
        MeansSolution next = optimal_means(x, result.memberships, m);
        MembershipMatrix next_r = optimal_memberships(x, next, m);
        const double next_cost = fuzzy_cost(x, next, next_r, m);
        result.means = std::move(next);
        result.memberships = std::move(next_r);
        result.trace.push_back(next_cost);
        const double scale = std::max(cost, 1e-300);
        if ((cost - next_cost) / scale < tol) {
            cost = next_cost;
            break;
        }
        cost = next_cost;
    }
    return result;
}

double negligible_threshold(uint32_t big_k, double epsilon, double m) {
    return epsilon / (4.0 * m * static_cast<double>(big_k) *
                      static_cast<double>(big_k));
}

bool is_negligible(const MembershipMatrix& memberships, std::size_t k,
                   uint32_t big_k, double epsilon, double m) {
    return memberships.column_max(k) <= negligible_threshold(big_k, epsilon, m);
}

MeansSolution remove_negligible_means(const WeightedDataset& x,
                                      const MeansSolution& means, double m,
                                      uint32_t big_k, double epsilon) {
    check_dims(x, means);
    if (means.count() > big_k)
        throw std::invalid_argument("means count exceeds K");
    MeansSolution current = means;
    const double threshold = negligible_threshold(big_k, epsilon, m);
    // Some column always has max >= 1/|M| > threshold, so this never empties
    // the set; each round removes at least one mean, so <= K rounds.
    for (uint32_t round = 0; round < big_k; ++round) {
        const MembershipMatrix r = optimal_memberships(x, current, m);
        std::vector<double> kept;
        std::size_t kept_count = 0;
        for (std::size_t k = 0; k < current.count(); ++k) {
            if (r.column_max(k) <= threshold) continue;
            const auto mu = current.mean(k);
            kept.insert(kept.end(), mu.begin(), mu.end());
            ++kept_count;
        }
        if (kept_count == current.count() || kept_count == 0) break;
        current = MeansSolution(std::move(kept), x.dim());
    }
    return current;
}

namespace {

/// Minimizes sum_k (g_k/G)^m * d2_k over integer compositions g of G.
double simplex_grid_min(std::span<const double> dists2, double m, uint64_t grid,
                        std::size_t level = 0, uint64_t remaining = 0,
                        double partial = 0.0) {
    if (level == 0) remaining = grid;
    const double scale = 1.0 / static_cast<double>(grid);
    if (level + 1 == dists2.size()) {
        const double r = static_cast<double>(remaining) * scale;
        return partial + pow_membership(r, m) * dists2[level];
    }
    double best = std::numeric_limits<double>::infinity();
    for (uint64_t g = 0; g <= remaining; ++g) {
        const double r = static_cast<double>(g) * scale;
        const double cost = simplex_grid_min(
            dists2, m, grid, level + 1, remaining - g,
            partial + pow_membership(r, m) * dists2[level]);
        best = std::min(best, cost);
    }
    return best;
}

}  // namespace

double brute_force_fuzzy_cost(const WeightedDataset& x, const MeansSolution& means,
                              double m, double grid_resolution, uint64_t budget) {
    check_dims(x, means);
    if (grid_resolution <= 0.0 || grid_resolution > 1.0)
        throw std::invalid_argument("grid resolution must be in (0,1]");
    const uint64_t grid =
        std::max<uint64_t>(1, static_cast<uint64_t>(std::llround(1.0 / grid_resolution)));
    // Nodes per point: C(grid + count - 1, count - 1).
    long double nodes = 1.0L;
    for (std::size_t j = 1; j < means.count(); ++j)
        nodes = nodes * static_cast<long double>(grid + j) / static_cast<long double>(j);
    const long double total_work =
        nodes * static_cast<long double>(x.size()) *
        static_cast<long double>(means.count());
    if (total_work > static_cast<long double>(budget))
        throw infeasible_error("simplex grid needs " + std::to_string(static_cast<double>(total_work)) +
                               " evaluations, over the budget of " + std::to_string(budget));
    double total = 0.0;
    std::vector<double> d2;
    for (std::size_t i = 0; i < x.size(); ++i) {
        point_distances2(x, means, i, d2);
        total += static_cast<double>(x.weight(i)) * simplex_grid_min(d2, m, grid);
    }
    return total;
}

}  // namespace fkm
