#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <limits>
#include <vector>

#include "fkm/bicriteria.hpp"
#include "fkm/common.hpp"
#include "fkm/fuzzy.hpp"

using namespace fkm;

namespace {

// Exact 1-D K-means by enumerating contiguous partitions (optimal clusters of
// sorted 1-D data are intervals).
double optimal_kmeans_1d(std::vector<double> xs, std::size_t k) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    std::vector<double> prefix(n + 1, 0.0), prefix2(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + xs[i];
        prefix2[i + 1] = prefix2[i] + xs[i] * xs[i];
    }
    const auto segment_cost = [&](std::size_t a, std::size_t b) {  // [a, b)
        const double count = static_cast<double>(b - a);
        const double sum = prefix[b] - prefix[a];
        return (prefix2[b] - prefix2[a]) - sum * sum / count;
    };
    std::vector<std::vector<double>> dp(
        k + 1, std::vector<double>(n + 1, std::numeric_limits<double>::infinity()));
    dp[0][0] = 0.0;
    for (std::size_t clusters = 1; clusters <= k; ++clusters)
        for (std::size_t end = 1; end <= n; ++end)
            for (std::size_t split = clusters - 1; split < end; ++split)
                dp[clusters][end] = std::min(
                    dp[clusters][end], dp[clusters - 1][split] + segment_cost(split, end));
    return dp[k][n];
}

}  // namespace

TEST_CASE("bicriteria on degenerate inputs") {
    // K distinct points: zero cost.
    WeightedDataset distinct(std::vector<double>{0.0, 5.0, 9.0}, 1);
    const BicriteriaSolution a = bicriteria_kmeans(distinct, 3, 0.1, 42);
    CHECK(a.cost == 0.0);

    // Single point.
    WeightedDataset one(std::vector<double>{4.0, 4.0}, 2);
    const BicriteriaSolution b = bicriteria_kmeans(one, 2, 0.1, 42);
    CHECK(b.centers.count() == 1);
    CHECK(b.cost == 0.0);

    // More clusters than points: all distinct points come back.
    WeightedDataset two(std::vector<double>{0.0, 1.0}, 1);
    const BicriteriaSolution c = bicriteria_kmeans(two, 5, 0.1, 42);
    CHECK(c.centers.count() == 2);
    CHECK(c.cost == 0.0);
}

TEST_CASE("bicriteria cost against the exact 1-D optimum") {
    Rng rng(11);
    std::vector<double> xs;
    for (int cluster = 0; cluster < 4; ++cluster)
        for (int i = 0; i < 3; ++i)
            xs.push_back(cluster * 50.0 + rng.uniform(0.0, 1.0));
    const double optimal = optimal_kmeans_1d(xs, 4);
    WeightedDataset data(xs, 1);
    const BicriteriaSolution a = bicriteria_kmeans(data, 4, 0.1, 7);
    CHECK(a.centers.count() <= 8);
    CHECK(kmeans_cost(data, a.centers) <= a.alpha * optimal + 1e-9);
    CHECK(a.cost == doctest::Approx(kmeans_cost(data, a.centers)).epsilon(1e-12));
}

TEST_CASE("bicriteria never beats nothing but always beats one centroid") {
    Rng rng(12);
    std::vector<double> xs(60);
    for (double& v : xs) v = rng.uniform(0.0, 10.0);
    WeightedDataset data(xs, 2);
    const BicriteriaSolution a = bicriteria_kmeans(data, 2, 0.1, 3);
    const std::vector<double> centroid = weighted_centroid(data);
    const double single = kmeans_cost(data, MeansSolution(centroid, 2));
    CHECK(a.cost <= single + 1e-9);
}

TEST_CASE("bicriteria determinism") {
    Rng rng(13);
    std::vector<double> xs(40);
    for (double& v : xs) v = rng.uniform(0.0, 1.0);
    WeightedDataset data(xs, 1);
    const BicriteriaSolution a = bicriteria_kmeans(data, 3, 0.2, 99);
    const BicriteriaSolution b = bicriteria_kmeans(data, 3, 0.2, 99);
    CHECK(a.centers.data() == b.centers.data());
    CHECK(a.cost == b.cost);
    const BicriteriaSolution c = bicriteria_kmeans(data, 3, 0.2, 100);
    CHECK((c.centers.data() != a.centers.data() || c.cost == a.cost));
}

TEST_CASE("weights steer the seeding") {
    // A point with overwhelming weight is always picked first.
    WeightedDataset data(std::vector<double>{0.0, 100.0}, 1, {1000000, 1});
    for (uint64_t seed = 0; seed < 5; ++seed) {
        const BicriteriaSolution a = bicriteria_kmeans(data, 1, 0.5, seed);
        CHECK(a.centers.count() == 2);  // beta*K = 2 centers cover both
        CHECK(a.cost == 0.0);
    }
}

TEST_CASE("induced partition") {
    WeightedDataset data(std::vector<double>{0.0, 1.0, 2.0, 3.0}, 1);

    BicriteriaSolution single;
    single.centers = MeansSolution(std::vector<double>{1.0}, 1);
    const InducedPartition all_one = induce_partition(data, single);
    for (uint32_t cell : all_one.assignment) CHECK(cell == 0);

    // Equidistant point goes to the lower index.
    BicriteriaSolution pair;
    pair.centers = MeansSolution(std::vector<double>{0.0, 2.0}, 1);
    const InducedPartition tied = induce_partition(data, pair);
    CHECK(tied.assignment[1] == 0);

    // Assigned distance equals the distance to the center set.
    Rng rng(14);
    std::vector<double> xs(30);
    for (double& v : xs) v = rng.uniform(0.0, 4.0);
    WeightedDataset cloud(xs, 1);
    BicriteriaSolution seeded = bicriteria_kmeans(cloud, 2, 0.1, 5);
    const InducedPartition partition = induce_partition(cloud, seeded);
    std::vector<std::size_t> counts(seeded.centers.count(), 0);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < seeded.centers.count(); ++c)
            best = std::min(best,
                            squared_distance(cloud.point(i), seeded.centers.mean(c)));
        const double assigned = squared_distance(
            cloud.point(i), seeded.centers.mean(partition.assignment[i]));
        CHECK(assigned == doctest::Approx(best).epsilon(1e-15));
        ++counts[partition.assignment[i]];
    }
    // Cells cover every point exactly once by construction of the counts.
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    CHECK(total == cloud.size());
}
