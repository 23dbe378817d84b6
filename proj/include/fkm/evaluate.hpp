#ifndef FKM_EVALUATE_HPP
#define FKM_EVALUATE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fkm/coreset.hpp"
#include "fkm/dataset.hpp"

namespace fkm {

enum class SolutionMode {
    /// Candidate solutions inducing a negligible cluster on X are rejected;
    /// ratios are held to [1 +- eps] (and k-means to its tightened interval).
    non_negligible,
    /// Anything goes, including means far outside the data; ratios are held
    /// to [1 +- 3 eps].
    unrestricted,
};

std::string to_string(SolutionMode mode);
SolutionMode solution_mode_from_string(const std::string& name);

struct EvalConfig {
    FuzzyParams params;
    uint32_t n_solutions = 100;
    SolutionMode mode = SolutionMode::non_negligible;
    uint64_t seed = 1;
    /// Bounding-box inflation for candidate means; 0 picks 1x for
    /// non-negligible mode and 3x for unrestricted.
    double box_inflation = 0.0;
    /// Assumed bicriteria inflation, echoing the build; sets the k-means
    /// interval through eps_tilde.
    double alpha = 16.0;
    double beta = 2.0;
};

/// Per-solution cost ratios of a coreset against its source data, plus the
/// pass counts at the mode's intervals. Reproducible byte-for-byte from the
/// inputs and seed; wall-clock timing is kept out of the serialized form.
struct TrialReport {
    EvalConfig config;
    std::size_t dataset_points = 0;
    uint64_t dataset_weight = 0;
    std::size_t coreset_points = 0;
    uint64_t coreset_weight = 0;
    double eps_tilde = 0.0;
    double fuzzy_lo = 0.0, fuzzy_hi = 0.0;
    double km_lo = 0.0, km_hi = 0.0;
    std::vector<double> fuzzy_ratio;
    std::vector<double> km_ratio;
    uint32_t fuzzy_pass = 0;
    uint32_t km_pass = 0;
    double elapsed_seconds = 0.0;  // diagnostic only, never serialized

    double fuzzy_pass_fraction() const;
    double km_pass_fraction() const;
};

/// Samples candidate solutions from the (optionally inflated) bounding box of
/// X, filters them per the mode, and reports phi and k-means cost ratios of
/// the coreset against X. Solution evaluations run in parallel with a fixed
/// result layout.
TrialReport evaluate_coreset(const WeightedDataset& x, const Coreset& coreset,
                             const EvalConfig& config);

void write_report(std::ostream& out, const TrialReport& report);

}  // namespace fkm

#endif
