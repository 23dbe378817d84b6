#ifndef FKM_FUZZY_HPP
#define FKM_FUZZY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fkm/dataset.hpp"

namespace fkm {

/// Weighted soft-clustering cost: sum over points of w(x) * sum over means of
/// r(x,k)^m * ||x - mu_k||^2.
double fuzzy_cost(const WeightedDataset& x, const MeansSolution& means,
                  const MembershipMatrix& memberships, double m);

/// Cost-minimizing membership row for one point, given its squared distances
/// to every mean. Points coinciding with t >= 1 means split the row evenly
/// across the coinciding means.
void membership_row(std::span<const double> dists2, double m, std::span<double> out);

/// Cost-minimizing memberships for every point. A point's row depends only on
/// the point and the means, never on weights or other points.
MembershipMatrix optimal_memberships(const WeightedDataset& x,
                                     const MeansSolution& means, double m);

/// Cost-minimizing means for fixed memberships: the r^m-weighted centroids.
/// Columns with zero mass are reported in degenerate_out (if given) and placed
/// at the weighted centroid of the data.
MeansSolution optimal_means(const WeightedDataset& x,
                            const MembershipMatrix& memberships, double m,
                            std::vector<std::size_t>* degenerate_out = nullptr);

/// Cost of a means set under its own optimal memberships.
double fuzzy_cost_of_means(const WeightedDataset& x, const MeansSolution& means,
                           double m);

/// Total membership mass of cluster k: sum of w(x) * r(x,k)^m.
double cluster_size(const WeightedDataset& x, const MembershipMatrix& memberships,
                    double m, std::size_t k);

/// Cost contribution of cluster k; the per-cluster costs sum to fuzzy_cost.
double cluster_cost(const WeightedDataset& x, const MeansSolution& means,
                    const MembershipMatrix& memberships, double m, std::size_t k);

/// Hard clustering cost: each point pays its squared distance to the nearest
/// mean, times its weight.
double kmeans_cost(const WeightedDataset& x, const MeansSolution& means);

/// 1-means cost of a point set around its weighted centroid.
double kmeans_cost_around_centroid(const WeightedDataset& x);

std::vector<double> weighted_centroid(const WeightedDataset& x);

struct FmResult {
    MeansSolution means;
    MembershipMatrix memberships;
    std::vector<double> trace;  // cost after each full update, non-increasing
};

/// Alternating minimization from a K-means-style start. Stops when the
/// relative improvement drops below tol or after max_iters rounds.
FmResult fm_algorithm(const WeightedDataset& x, uint32_t k, double m,
                      const MeansSolution& init, uint32_t max_iters, double tol);

/// True iff every membership in column k is at most epsilon / (4 m K^2).
bool is_negligible(const MembershipMatrix& memberships, std::size_t k,
                   uint32_t big_k, double epsilon, double m);

double negligible_threshold(uint32_t big_k, double epsilon, double m);

/// Drops means whose induced clusters are negligible, recomputing memberships
/// after each round until none remain. Never returns an empty set.
MeansSolution remove_negligible_means(const WeightedDataset& x,
                                      const MeansSolution& means, double m,
                                      uint32_t big_k, double epsilon);

/// Grid-search oracle: minimizes the membership cost per point over a simplex
/// grid with the given resolution. Independent of the closed-form path; used
/// to validate it. Throws infeasible_error when the grid exceeds the budget.
double brute_force_fuzzy_cost(const WeightedDataset& x, const MeansSolution& means,
                              double m, double grid_resolution,
                              uint64_t budget = 500000000ULL);

}  // namespace fkm

#endif
