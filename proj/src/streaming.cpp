#include "fkm/streaming.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fkm/common.hpp"

namespace fkm {

double level_epsilon(const StreamConfig& config, uint32_t level) {
    if (level > config.max_depth)
        throw std::invalid_argument("level exceeds the configured depth");
    return config.params.epsilon / (2.0 * (config.max_depth + 1.0));
}

double level_epsilon_product(const StreamConfig& config) {
    double product = 1.0;
    for (uint32_t i = 0; i <= config.max_depth; ++i)
        product *= 1.0 + level_epsilon(config, i);
    return product;
}

uint64_t default_block_size(const FuzzyParams& params,
                            const BicriteriaOptions& opts) {
    // Rough fixed point of the level-0 size bound beta*K*(F+1)*q; the bound
    // saturates quickly, so a few rounds suffice. Clamped to keep pathological
    // constants usable.
    StreamConfig probe{params, opts, 0, 24, 0};
    const double eps0 = level_epsilon(probe, 0);
    double block = 1024.0;
    for (int round = 0; round < 4; ++round) {
        const double et = epsilon_tilde(eps0, opts.alpha, params.k, params.m,
                                        params.const_a);
        double bound;
        try {
            const double lg = log_gamma(opts.alpha, opts.beta, params.k, params.m,
                                        block, 2, eps0, et, params.const_b,
                                        params.const_c);
            const uint32_t levels = static_cast<uint32_t>(
                std::max(0.0, std::ceil(0.5 * std::log2(opts.alpha * block))));
            const uint64_t q = sample_size_q(opts.alpha, opts.beta, params.k,
                                             params.m, et, params.delta / 3.0,
                                             levels, lg, params.const_q);
            bound = opts.beta * params.k * (levels + 1.0) *
                    static_cast<double>(q);
        } catch (const std::invalid_argument&) {
            bound = 65536.0;
        }
        block = std::clamp(bound, 512.0, 65536.0);
    }
    return static_cast<uint64_t>(block);
}

Coreset merge(const Coreset& c1, const Coreset& c2) {
    if (c1.size() == 0) return c2;
    if (c2.size() == 0) return c1;
    if (c1.dim != c2.dim)
        throw std::invalid_argument("cannot merge coresets of different dimension");
    Coreset out;
    out.dim = c1.dim;
    out.points = c1.points;
    out.points.insert(out.points.end(), c2.points.begin(), c2.points.end());
    out.weights = c1.weights;
    out.weights.insert(out.weights.end(), c2.weights.begin(), c2.weights.end());
    out.source_total = c1.source_total + c2.source_total;
    // Source indices stop being meaningful across different sources.
    return out;
}

Coreset reduce(const Coreset& c, const StreamConfig& config, uint32_t level,
               uint64_t seed) {
    if (c.size() == 0) return c;
    FuzzyParams level_params = config.params;
    level_params.epsilon = level_epsilon(config, level);
    Coreset reduced =
        coreset_from_weighted(c.as_dataset(), level_params, seed,
                              config.bicriteria);
    if (reduced.size() >= c.size()) return c;
    reduced.source_index.clear();
    return reduced;
}

CoresetStream::CoresetStream(std::size_t dim, StreamConfig config)
    : dim_(dim), config_(std::move(config)) {
    if (dim_ == 0) throw std::invalid_argument("stream dimension must be positive");
    config_.params.validate();
    block_size_ = config_.base_block_size != 0
                      ? config_.base_block_size
                      : default_block_size(config_.params, config_.bicriteria);
    if (block_size_ == 0)
        throw std::invalid_argument("block size must be positive");
    const double compounded = level_epsilon_product(config_);
    if (compounded > 1.0 + config_.params.epsilon + tol::cost)
        throw std::invalid_argument(
            "level epsilon schedule compounds beyond 1+epsilon");
    levels_.resize(config_.max_depth + 1);
}

void CoresetStream::insert(std::span<const double> point) {
    if (point.size() != dim_)
        throw std::invalid_argument("point dimension does not match stream");
    buffer_.insert(buffer_.end(), point.begin(), point.end());
    ++total_seen_;
    if (buffer_.size() / dim_ >= block_size_) flush_block();
}

void CoresetStream::flush_block() {
    WeightedDataset block(std::move(buffer_), dim_);
    buffer_.clear();
    FuzzyParams level_params = config_.params;
    level_params.epsilon = level_epsilon(config_, 0);
    Coreset carry = fuzzy_coreset(block, level_params,
                                  mix_seed(config_.seed, 0xB10Cu, blocks_built_),
                                  config_.bicriteria);
    carry.source_index.clear();
    ++blocks_built_;
    uint32_t level = 0;
    while (levels_[level].has_value()) {
        // Two coresets on one level: carry the pair up the binary counter.
        Coreset merged = merge(*levels_[level], carry);
        levels_[level].reset();
        if (level + 1 > config_.max_depth)
            throw std::runtime_error("stream exceeded the configured depth");
        carry = reduce(merged, config_, level + 1,
                       mix_seed(config_.seed, 0xEDu, reductions_));
        ++reductions_;
        ++level;
    }
    levels_[level] = std::move(carry);
}

Coreset CoresetStream::finalize() const {
    Coreset out;
    out.dim = dim_;
    for (const auto& level : levels_) {
        if (!level.has_value()) continue;
        out = merge(out, *level);
    }
    if (!buffer_.empty()) {
        Coreset raw;
        raw.dim = dim_;
        const std::size_t count = buffer_.size() / dim_;
        raw.points = buffer_;
        raw.weights.assign(count, 1);
        raw.source_total = count;
        out = merge(out, raw);
    }
    if (out.size() == 0) out.source_total = 0;
    return out;
}

uint64_t CoresetStream::summarized_points() const {
    uint64_t total = buffer_.size() / dim_;
    for (const auto& level : levels_)
        if (level.has_value()) total += level->size();
    return total;
}

void CoresetStream::restore(std::vector<std::optional<Coreset>> levels,
                            std::vector<double> buffer, uint64_t total_seen,
                            uint64_t reductions) {
    if (levels.size() != levels_.size())
        throw std::invalid_argument("checkpoint depth does not match config");
    levels_ = std::move(levels);
    buffer_ = std::move(buffer);
    total_seen_ = total_seen;
    reductions_ = reductions;
    blocks_built_ = 0;
    for (std::size_t i = 0; i < levels_.size(); ++i)
        if (levels_[i].has_value()) blocks_built_ += 1ULL << i;
}

}  // namespace fkm
