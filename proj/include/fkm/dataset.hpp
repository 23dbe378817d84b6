#ifndef FKM_DATASET_HPP
#define FKM_DATASET_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fkm/common.hpp"

namespace fkm {

/// Points in R^D with positive integer weights. Storage is row-major.
class WeightedDataset {
public:
    /// Unit-weight dataset; data.size() must be a multiple of dim.
    WeightedDataset(std::vector<double> data, std::size_t dim);

    WeightedDataset(std::vector<double> data, std::size_t dim,
                    std::vector<uint64_t> weights);

    std::size_t size() const { return n_; }
    std::size_t dim() const { return dim_; }

    std::span<const double> point(std::size_t i) const {
        return {data_.data() + i * dim_, dim_};
    }

    uint64_t weight(std::size_t i) const { return weights_[i]; }
    uint64_t total_weight() const { return total_weight_; }
    bool unit_weights() const { return total_weight_ == n_; }

    const std::vector<double>& data() const { return data_; }
    const std::vector<uint64_t>& weights() const { return weights_; }

private:
    std::size_t dim_ = 0;
    std::size_t n_ = 0;
    std::vector<double> data_;
    std::vector<uint64_t> weights_;
    uint64_t total_weight_ = 0;
};

/// A set of at most K mean vectors.
class MeansSolution {
public:
    MeansSolution() = default;
    MeansSolution(std::vector<double> flat, std::size_t dim);

    std::size_t count() const { return count_; }
    std::size_t dim() const { return dim_; }

    std::span<const double> mean(std::size_t k) const {
        return {flat_.data() + k * dim_, dim_};
    }

    void append(std::span<const double> mean);

    const std::vector<double>& data() const { return flat_; }
    std::vector<double>& data() { return flat_; }

private:
    std::size_t dim_ = 0;
    std::size_t count_ = 0;
    std::vector<double> flat_;
};

/// Row-stochastic membership matrix: entry (i, k) is the fraction of point i
/// assigned to mean k. Rows sum to 1 within tol::row_sum.
class MembershipMatrix {
public:
    MembershipMatrix() = default;
    MembershipMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}
    MembershipMatrix(std::vector<double> entries, std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t i, std::size_t k) const {
        return entries_[i * cols_ + k];
    }
    double& operator()(std::size_t i, std::size_t k) {
        return entries_[i * cols_ + k];
    }

    std::span<const double> row(std::size_t i) const {
        return {entries_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) {
        return {entries_.data() + i * cols_, cols_};
    }

    double column_max(std::size_t k) const;

    /// Throws if any entry is outside [0,1] or a row sum is off by more than
    /// tol::row_sum.
    void validate() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

/// Problem parameters: fuzzifier, cluster count, accuracy targets, and the
/// tunable constants of the sampling formulas.
struct FuzzyParams {
    double m = 2.0;
    uint32_t k = 2;
    double epsilon = 0.2;
    double delta = 0.1;
    double const_q = 1.0;
    double const_a = 1.0;
    double const_b = 4.0;
    double const_c = 4.0;

    void validate() const;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace fkm

#endif
