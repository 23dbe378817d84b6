#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "fkm/common.hpp"
#include "fkm/fuzzy.hpp"
#include "fkm/ptas.hpp"

using namespace fkm;

namespace {

// Multi-start alternating descent; the acceptance reference, not an optimum.
double reference_cost(const WeightedDataset& x, uint32_t k, double m,
                      int restarts, uint64_t seed) {
    double best = std::numeric_limits<double>::infinity();
    MeansSolution best_means;
    for (int r = 0; r < restarts; ++r) {
        Rng rng(mix_seed(seed, 0xFE0u, r));
        std::vector<double> init;
        for (uint32_t c = 0; c < k; ++c) {
            const auto p = x.point(rng.below(x.size()));
            for (double v : p) init.push_back(v + 1e-6 * rng.uniform());
        }
        const FmResult run =
            fm_algorithm(x, k, m, MeansSolution(init, x.dim()), 100, 1e-9);
        const double cost = run.trace.back();
        if (cost < best) {
            best = cost;
            best_means = run.means;
        }
    }
    const FmResult refined = fm_algorithm(x, k, m, best_means, 10000, 1e-10);
    return refined.trace.back();
}

}  // namespace

TEST_CASE("enumerate_candidates") {
    // t = 1 reproduces the points.
    WeightedDataset x(std::vector<double>{0.0, 2.0}, 1);
    const CandidateMeansPool singles = enumerate_candidates(x, 1, 1000);
    CHECK(singles.count == 2);
    CHECK(singles.candidate(0)[0] == 0.0);
    CHECK(singles.candidate(1)[0] == 2.0);

    // Pairs over {0, 2}: means {0, 1, 2}.
    const CandidateMeansPool pairs = enumerate_candidates(x, 2, 1000);
    REQUIRE(pairs.count == 3);
    CHECK(pairs.candidate(0)[0] == 0.0);
    CHECK(pairs.candidate(1)[0] == 1.0);
    CHECK(pairs.candidate(2)[0] == 2.0);

    // Distinct points: the multiset count matches C(N + t - 1, t) before dedup.
    WeightedDataset spread(std::vector<double>{0.0, 1.0, 3.0, 7.0}, 1);
    const CandidateMeansPool pool = enumerate_candidates(spread, 2, 1000);
    CHECK(pool.count == 10);  // C(5, 2); every pair mean distinct here

    // Budget is enforced with the count named.
    try {
        enumerate_candidates(spread, 9, 10);
        FAIL("expected infeasible_error");
    } catch (const infeasible_error& e) {
        CHECK(std::string(e.what()).find("budget") != std::string::npos);
    }
}

TEST_CASE("candidate pool ignores weights") {
    std::vector<double> pts{0.0, 1.0, 5.0};
    WeightedDataset plain(pts, 1);
    WeightedDataset heavy(pts, 1, {7, 1, 19});
    const CandidateMeansPool a = enumerate_candidates(plain, 2, 1000);
    const CandidateMeansPool b = enumerate_candidates(heavy, 2, 1000);
    CHECK(a.flat == b.flat);
}

TEST_CASE("derandomized sampling on trivial instances") {
    // Two points, two clusters, t=1: both points, zero cost.
    WeightedDataset x(std::vector<double>{0.0, 10.0}, 1);
    PtasOptions opts;
    opts.t_override = 1;
    const MeansSolution m = derandomized_sampling_ptas(x, 2, 2.0, 1.0, opts);
    std::multiset<double> got(m.data().begin(), m.data().end());
    CHECK(got == std::multiset<double>{0.0, 10.0});
    CHECK(fuzzy_cost_of_means(x, m, 2.0) == 0.0);
}

TEST_CASE("argmin soundness by re-evaluation") {
    WeightedDataset x(std::vector<double>{0.0, 1.0, 6.0, 7.5}, 1);
    PtasOptions opts;
    opts.t_override = 2;
    const MeansSolution winner = derandomized_sampling_ptas(x, 2, 2.0, 1.0, opts);
    const double winning = fuzzy_cost_of_means(x, winner, 2.0);

    const CandidateMeansPool pool = enumerate_candidates(x, 2, 1000);
    for (std::size_t i = 0; i < pool.count; ++i) {
        for (std::size_t j = i + 1; j < pool.count; ++j) {
            std::vector<double> flat{pool.candidate(i)[0], pool.candidate(j)[0]};
            const double cost =
                fuzzy_cost_of_means(x, MeansSolution(flat, 1), 2.0);
            CHECK(winning <= cost + 1e-12);
        }
    }
}

TEST_CASE("doubling t can only improve the enumerated optimum") {
    Rng rng(41);
    std::vector<double> pts(6);
    for (double& v : pts) v = rng.uniform(0.0, 4.0);
    WeightedDataset x(pts, 1);
    PtasOptions small;
    small.t_override = 2;
    PtasOptions big;
    big.t_override = 4;  // every t-multiset mean recurs as a 2t-multiset mean
    const double coarse = fuzzy_cost_of_means(
        x, derandomized_sampling_ptas(x, 2, 2.0, 1.0, small), 2.0);
    const double fine = fuzzy_cost_of_means(
        x, derandomized_sampling_ptas(x, 2, 2.0, 1.0, big), 2.0);
    CHECK(fine <= coarse + 1e-12);
}

TEST_CASE("ptas against the multi-start reference") {
    Rng rng(42);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> pts(8 * 2);
        for (double& v : pts) v = rng.uniform(0.0, 5.0);
        WeightedDataset x(pts, 2);
        PtasOptions opts;
        opts.t_override = 2;
        const MeansSolution m = derandomized_sampling_ptas(x, 2, 2.0, 1.0, opts);
        const double cost = fuzzy_cost_of_means(x, m, 2.0);
        const double reference = reference_cost(x, 2, 2.0, 200, trial);
        CHECK(cost <= 2.0 * reference + 1e-9);
    }
}

TEST_CASE("ptas_on_coreset equals direct ptas without compression") {
    Rng rng(43);
    std::vector<double> pts(8);
    for (double& v : pts) v = rng.uniform(0.0, 5.0);
    WeightedDataset x(pts, 1);

    FuzzyParams params;  // default constants keep the coreset uncompressed
    params.k = 2;
    params.epsilon = 0.9;
    PtasOptions opts;
    opts.t_override = 2;

    const MeansSolution direct =
        derandomized_sampling_ptas(x, 2, 2.0, params.epsilon / 3.0, opts);
    const MeansSolution via_coreset = ptas_on_coreset(x, params, 17, opts);

    std::vector<double> a(direct.data());
    std::vector<double> b(via_coreset.data());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("inaba concentration") {
    // Single point: sample mean is the mean.
    WeightedDataset lone(std::vector<double>{3.0, 4.0}, 2);
    CHECK(inaba_concentration_check(lone, 3, 100, 0.5, 1) == 1.0);

    // In high dimension the squared deviation concentrates at its mean, half
    // the bound at delta = 0.5, so nearly every trial lands inside.
    Rng rng(44);
    std::vector<double> wide(100 * 20);
    for (double& v : wide) v = rng.uniform(0.0, 1.0);
    WeightedDataset high(wide, 20);
    CHECK(inaba_concentration_check(high, 100, 500, 0.5, 2) >= 0.99);

    // The advertised rate holds within binomial noise.
    std::vector<double> pts(100);
    for (double& v : pts) v = rng.uniform(0.0, 1.0);
    WeightedDataset x(pts, 1);
    const double rate = inaba_concentration_check(x, 10, 10000, 0.1, 3);
    const double sigma = std::sqrt(0.1 * 0.9 / 10000.0);
    CHECK(rate >= 0.9 - 3.0 * sigma);
}
