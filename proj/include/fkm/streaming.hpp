#ifndef FKM_STREAMING_HPP
#define FKM_STREAMING_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fkm/coreset.hpp"

namespace fkm {

struct StreamConfig {
    FuzzyParams params;
    BicriteriaOptions bicriteria;
    /// Raw points buffered before a level-0 coreset is built. 0 picks a
    /// default from the level-0 size bound.
    uint64_t base_block_size = 0;
    /// Maximum carry depth; 2^max_depth blocks fit before overflow.
    uint32_t max_depth = 24;
    uint64_t seed = 1;
};

/// Accuracy used for every level build. Uniform over the configured depth so
/// the compounded factor stays within 1 + epsilon; see level_epsilon_product.
double level_epsilon(const StreamConfig& config, uint32_t level);

/// Product of (1 + eps_i) over the configured depth, checked at construction.
double level_epsilon_product(const StreamConfig& config);

uint64_t default_block_size(const FuzzyParams& params,
                            const BicriteriaOptions& opts);

/// Concatenation: a coreset of the union of the sources.
Coreset merge(const Coreset& c1, const Coreset& c2);

/// Re-compresses a coreset with the level's accuracy. Returns the input
/// unchanged when the rebuild would not shrink it.
Coreset reduce(const Coreset& c, const StreamConfig& config, uint32_t level,
               uint64_t seed);

/// Merge-and-reduce bucket tree over an insertion-only stream: at most one
/// coreset per level, level i summarizing 2^i base blocks.
class CoresetStream {
public:
    CoresetStream(std::size_t dim, StreamConfig config);

    void insert(std::span<const double> point);

    /// Coreset of everything seen so far: all level coresets plus the raw
    /// buffer at weight 1. An empty stream yields an empty coreset.
    Coreset finalize() const;

    uint64_t total_seen() const { return total_seen_; }
    std::size_t dim() const { return dim_; }
    const StreamConfig& config() const { return config_; }
    uint64_t block_size() const { return block_size_; }
    const std::vector<std::optional<Coreset>>& levels() const { return levels_; }
    std::size_t buffer_count() const { return buffer_.size() / dim_; }
    const std::vector<double>& buffer() const { return buffer_; }
    uint64_t reductions() const { return reductions_; }

    /// Points currently resident across level coresets and the buffer.
    uint64_t summarized_points() const;

    /// Checkpoint support: restores counters and level contents verbatim.
    void restore(std::vector<std::optional<Coreset>> levels,
                 std::vector<double> buffer, uint64_t total_seen,
                 uint64_t reductions);

private:
    void flush_block();

    std::size_t dim_;
    StreamConfig config_;
    uint64_t block_size_;
    std::vector<double> buffer_;
    std::vector<std::optional<Coreset>> levels_;
    uint64_t total_seen_ = 0;
    uint64_t blocks_built_ = 0;
    uint64_t reductions_ = 0;
};

}  // namespace fkm

#endif
