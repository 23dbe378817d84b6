#ifndef FKM_GENERATOR_HPP
#define FKM_GENERATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fkm/dataset.hpp"

namespace fkm {

/// Isotropic Gaussian mixture description.
struct MixtureSpec {
    struct Component {
        std::vector<double> mean;
        double sigma = 1.0;
        uint64_t count = 0;
    };
    std::size_t dim = 0;
    std::vector<Component> components;

    uint64_t total_count() const;
    void validate() const;
};

/// Deterministic sample of the mixture, one component after another, unit
/// weights.
WeightedDataset generate_dataset(const MixtureSpec& spec, uint64_t seed);

MixtureSpec mixture_from_json(const std::string& text);
std::string mixture_to_json(const MixtureSpec& spec);

/// Deterministic Fisher-Yates permutation of the points.
WeightedDataset shuffle_dataset(const WeightedDataset& x, uint64_t seed);

/// Pareto(1)-radius cloud: points at distance 1/u in a uniform direction.
/// Spans dyadic distance scales, so every ring level stays populated as n
/// grows; the natural stress data for ring sampling.
WeightedDataset heavy_tailed_cloud(std::size_t n, std::size_t dim, uint64_t seed);

}  // namespace fkm

#endif
