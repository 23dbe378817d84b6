#include "fkm/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "fkm/common.hpp"
#include "fkm/fuzzy.hpp"

namespace fkm {

std::string to_string(SolutionMode mode) {
    return mode == SolutionMode::non_negligible ? "non-negligible" : "unrestricted";
}

SolutionMode solution_mode_from_string(const std::string& name) {
    if (name == "non-negligible") return SolutionMode::non_negligible;
    if (name == "unrestricted") return SolutionMode::unrestricted;
    throw std::invalid_argument("unknown solution mode: " + name);
}

double TrialReport::fuzzy_pass_fraction() const {
    return fuzzy_ratio.empty()
               ? 0.0
               : static_cast<double>(fuzzy_pass) /
                     static_cast<double>(fuzzy_ratio.size());
}

double TrialReport::km_pass_fraction() const {
    return km_ratio.empty() ? 0.0
                            : static_cast<double>(km_pass) /
                                  static_cast<double>(km_ratio.size());
}

namespace {

struct SolutionStats {
    double phi = 0.0;
    double km = 0.0;
    std::vector<double> column_max;
};

/// One fused pass: phi under optimal memberships, k-means cost, and the
/// membership column maxima.
SolutionStats solution_stats(const WeightedDataset& x, const MeansSolution& means,
                             double m, bool want_column_max) {
    SolutionStats stats;
    if (want_column_max) stats.column_max.assign(means.count(), 0.0);
    std::vector<double> d2(means.count());
    std::vector<double> row(means.count());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto p = x.point(i);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < means.count(); ++k) {
            d2[k] = squared_distance(p, means.mean(k));
            best = std::min(best, d2[k]);
        }
        membership_row(d2, m, row);
        double point_cost = 0.0;
        for (std::size_t k = 0; k < means.count(); ++k) {
            point_cost += (m == 2.0 ? row[k] * row[k] : std::pow(row[k], m)) * d2[k];
            if (want_column_max)
                stats.column_max[k] = std::max(stats.column_max[k], row[k]);
        }
        const double w = static_cast<double>(x.weight(i));
        stats.phi += w * point_cost;
        stats.km += w * best;
    }
    return stats;
}

struct BoundingBox {
    std::vector<double> lo, hi;
};

BoundingBox bounding_box(const WeightedDataset& x, double inflation) {
    BoundingBox box;
    box.lo.assign(x.dim(), std::numeric_limits<double>::infinity());
    box.hi.assign(x.dim(), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto p = x.point(i);
        for (std::size_t d = 0; d < x.dim(); ++d) {
            box.lo[d] = std::min(box.lo[d], p[d]);
            box.hi[d] = std::max(box.hi[d], p[d]);
        }
    }
    for (std::size_t d = 0; d < x.dim(); ++d) {
        const double center = 0.5 * (box.lo[d] + box.hi[d]);
        const double half = 0.5 * (box.hi[d] - box.lo[d]) * inflation;
        box.lo[d] = center - half;
        box.hi[d] = center + half;
    }
    return box;
}

MeansSolution draw_solution(const BoundingBox& box, uint32_t k, uint64_t seed,
                            uint64_t index) {
    Rng rng(mix_seed(seed, 0xCA4Du, index));
    std::vector<double> flat;
    flat.reserve(k * box.lo.size());
    for (uint32_t c = 0; c < k; ++c)
        for (std::size_t d = 0; d < box.lo.size(); ++d)
            flat.push_back(rng.uniform(box.lo[d], box.hi[d]));
    return MeansSolution(std::move(flat), box.lo.size());
}

}  // namespace

TrialReport evaluate_coreset(const WeightedDataset& x, const Coreset& coreset,
                             const EvalConfig& config) {
    config.params.validate();
    if (coreset.dim != x.dim())
        throw std::invalid_argument("coreset dimension does not match dataset");
    if (config.n_solutions == 0)
        throw std::invalid_argument("need at least one candidate solution");

    const auto start = std::chrono::steady_clock::now();
    TrialReport report;
    report.config = config;
    if (report.config.box_inflation <= 0.0)
        report.config.box_inflation =
            config.mode == SolutionMode::unrestricted ? 3.0 : 1.0;
    report.dataset_points = x.size();
    report.dataset_weight = x.total_weight();
    report.coreset_points = coreset.size();
    report.coreset_weight = coreset.weight_sum();
    report.eps_tilde = epsilon_tilde(config.params.epsilon, config.alpha,
                                     config.params.k, config.params.m,
                                     config.params.const_a);

    const double eps = config.params.epsilon;
    if (config.mode == SolutionMode::non_negligible) {
        report.fuzzy_lo = 1.0 - eps;
        report.fuzzy_hi = 1.0 + eps;
    } else {
        report.fuzzy_lo = 1.0 - 3.0 * eps;
        report.fuzzy_hi = 1.0 + 3.0 * eps;
    }
    const double km_eps =
        report.eps_tilde /
        std::pow(static_cast<double>(config.params.k), config.params.m - 1.0);
    report.km_lo = 1.0 - km_eps;
    report.km_hi = 1.0 + km_eps;

    const BoundingBox box = bounding_box(x, report.config.box_inflation);
    const double threshold = negligible_threshold(
        config.params.k, config.params.epsilon, config.params.m);
    const WeightedDataset coreset_data = coreset.as_dataset();

    std::vector<MeansSolution> accepted;
    std::vector<SolutionStats> accepted_stats;
    const uint64_t attempt_cap = 200ULL * config.n_solutions;
    uint64_t attempts = 0;
    while (accepted.size() < config.n_solutions && attempts < attempt_cap) {
        const std::size_t batch = std::min<uint64_t>(
            config.n_solutions - accepted.size() + 8, attempt_cap - attempts);
        std::vector<MeansSolution> candidates(batch);
        std::vector<SolutionStats> stats(batch);
        std::vector<char> keep(batch, 0);
        parallel_for(batch, [&](std::size_t i) {
            candidates[i] =
                draw_solution(box, config.params.k, config.seed, attempts + i);
            stats[i] = solution_stats(
                x, candidates[i], config.params.m,
                config.mode == SolutionMode::non_negligible);
            bool ok = stats[i].phi > 0.0 && stats[i].km > 0.0;
            if (ok && config.mode == SolutionMode::non_negligible) {
                for (double cmax : stats[i].column_max)
                    if (cmax <= threshold) ok = false;
            }
            keep[i] = ok ? 1 : 0;
        });
        for (std::size_t i = 0;
             i < batch && accepted.size() < config.n_solutions; ++i) {
            if (!keep[i]) continue;
            accepted.push_back(std::move(candidates[i]));
            accepted_stats.push_back(std::move(stats[i]));
        }
        attempts += batch;
    }
    if (accepted.size() < config.n_solutions)
        throw std::runtime_error(
            "could not sample enough admissible candidate solutions");

    report.fuzzy_ratio.resize(accepted.size());
    report.km_ratio.resize(accepted.size());
    parallel_for(accepted.size(), [&](std::size_t i) {
        const SolutionStats on_coreset =
            solution_stats(coreset_data, accepted[i], config.params.m, false);
        report.fuzzy_ratio[i] = on_coreset.phi / accepted_stats[i].phi;
        report.km_ratio[i] = on_coreset.km / accepted_stats[i].km;
    });
    for (std::size_t i = 0; i < accepted.size(); ++i) {
        if (report.fuzzy_ratio[i] >= report.fuzzy_lo &&
            report.fuzzy_ratio[i] <= report.fuzzy_hi)
            ++report.fuzzy_pass;
        if (report.km_ratio[i] >= report.km_lo &&
            report.km_ratio[i] <= report.km_hi)
            ++report.km_pass;
    }
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return report;
}

namespace {

std::string fmt(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

}  // namespace

void write_report(std::ostream& out, const TrialReport& report) {
    out << "# fkm evaluation report\n";
    out << "[config]\n";
    out << "mode=" << to_string(report.config.mode) << "\n";
    out << "k=" << report.config.params.k << "\n";
    out << "m=" << fmt(report.config.params.m) << "\n";
    out << "epsilon=" << fmt(report.config.params.epsilon) << "\n";
    out << "delta=" << fmt(report.config.params.delta) << "\n";
    out << "const_q=" << fmt(report.config.params.const_q) << "\n";
    out << "const_a=" << fmt(report.config.params.const_a) << "\n";
    out << "const_b=" << fmt(report.config.params.const_b) << "\n";
    out << "const_c=" << fmt(report.config.params.const_c) << "\n";
    out << "alpha=" << fmt(report.config.alpha) << "\n";
    out << "beta=" << fmt(report.config.beta) << "\n";
    out << "seed=" << report.config.seed << "\n";
    out << "n_solutions=" << report.config.n_solutions << "\n";
    out << "box_inflation=" << fmt(report.config.box_inflation) << "\n";
    out << "[data]\n";
    out << "dataset_points=" << report.dataset_points << "\n";
    out << "dataset_weight=" << report.dataset_weight << "\n";
    out << "coreset_points=" << report.coreset_points << "\n";
    out << "coreset_weight=" << report.coreset_weight << "\n";
    out << "[summary]\n";
    out << "solutions=" << report.fuzzy_ratio.size() << "\n";
    out << "eps_tilde=" << fmt(report.eps_tilde) << "\n";
    out << "fuzzy_interval_lo=" << fmt(report.fuzzy_lo) << "\n";
    out << "fuzzy_interval_hi=" << fmt(report.fuzzy_hi) << "\n";
    out << "km_interval_lo=" << fmt(report.km_lo) << "\n";
    out << "km_interval_hi=" << fmt(report.km_hi) << "\n";
    out << "fuzzy_pass=" << report.fuzzy_pass << "\n";
    out << "km_pass=" << report.km_pass << "\n";
    out << "fuzzy_pass_fraction=" << fmt(report.fuzzy_pass_fraction()) << "\n";
    out << "km_pass_fraction=" << fmt(report.km_pass_fraction()) << "\n";
    out << "[ratios]\n";
    out << "index\tfuzzy\tkm\n";
    for (std::size_t i = 0; i < report.fuzzy_ratio.size(); ++i)
        out << i << "\t" << fmt(report.fuzzy_ratio[i]) << "\t"
            << fmt(report.km_ratio[i]) << "\n";
}

}  // namespace fkm
