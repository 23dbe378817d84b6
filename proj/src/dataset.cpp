#include "fkm/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fkm {

WeightedDataset::WeightedDataset(std::vector<double> data, std::size_t dim)
    : WeightedDataset(std::move(data), dim, {}) {}

WeightedDataset::WeightedDataset(std::vector<double> data, std::size_t dim,
                                 std::vector<uint64_t> weights)
    : dim_(dim), data_(std::move(data)), weights_(std::move(weights)) {
    if (dim_ == 0) throw std::invalid_argument("dataset dimension must be positive");
    if (data_.empty() || data_.size() % dim_ != 0)
        throw std::invalid_argument("dataset size is not a multiple of the dimension");
    n_ = data_.size() / dim_;
    if (weights_.empty()) weights_.assign(n_, 1);
    if (weights_.size() != n_)
        throw std::invalid_argument("weight count does not match point count");
    total_weight_ = 0;
    for (uint64_t w : weights_) {
        if (w == 0) throw std::invalid_argument("weights must be >= 1");
        total_weight_ += w;
    }
}

MeansSolution::MeansSolution(std::vector<double> flat, std::size_t dim)
    : dim_(dim), flat_(std::move(flat)) {
    if (dim_ == 0) throw std::invalid_argument("means dimension must be positive");
    if (flat_.empty() || flat_.size() % dim_ != 0)
        throw std::invalid_argument("means size is not a multiple of the dimension");
    count_ = flat_.size() / dim_;
}

void MeansSolution::append(std::span<const double> mean) {
    if (dim_ == 0) {
        dim_ = mean.size();
    } else if (mean.size() != dim_) {
        throw std::invalid_argument("mean dimension mismatch");
    }
    flat_.insert(flat_.end(), mean.begin(), mean.end());
    ++count_;
}

MembershipMatrix::MembershipMatrix(std::vector<double> entries, std::size_t rows,
                                   std::size_t cols)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
        throw std::invalid_argument("membership matrix shape mismatch");
}

double MembershipMatrix::column_max(std::size_t k) const {
    if (k >= cols_) throw std::out_of_range("membership column index out of range");
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) best = std::max(best, (*this)(i, k));
    return best;
}

void MembershipMatrix::validate() const {
    for (std::size_t i = 0; i < rows_; ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k < cols_; ++k) {
            const double r = (*this)(i, k);
            if (r < 0.0 || r > 1.0)
                throw std::invalid_argument("membership entry outside [0,1]");
            sum += r;
        }
        if (std::abs(sum - 1.0) > tol::row_sum)
            throw std::invalid_argument("membership row " + std::to_string(i) +
                                        " does not sum to 1");
    }
}

void FuzzyParams::validate() const {
    if (m <= 1.0) throw std::invalid_argument("fuzzifier m must be > 1");
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    if (epsilon <= 0.0 || epsilon >= 1.0)
        throw std::invalid_argument("epsilon must be in (0,1)");
    if (delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("delta must be in (0,1)");
    if (const_q <= 0.0 || const_a <= 0.0 || const_b <= 0.0 || const_c <= 0.0)
        throw std::invalid_argument("sampling constants must be positive");
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        sum += diff * diff;
    }
    return sum;
}

}  // namespace fkm
