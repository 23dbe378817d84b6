#include "fkm/generator.hpp"
#include <cmath>

#include <stdexcept>
#include <utility>

#include "fkm/common.hpp"
#include "json.hpp"

namespace fkm {

uint64_t MixtureSpec::total_count() const {
    uint64_t total = 0;
    for (const auto& c : components) total += c.count;
    return total;
}

void MixtureSpec::validate() const {
    if (dim == 0) throw std::invalid_argument("mixture dimension must be positive");
    if (components.empty())
        throw std::invalid_argument("mixture needs at least one component");
    for (const auto& c : components) {
        if (c.mean.size() != dim)
            throw std::invalid_argument("component mean dimension mismatch");
        if (c.sigma < 0.0)
            throw std::invalid_argument("component sigma must be non-negative");
        if (c.count == 0)
            throw std::invalid_argument("component count must be positive");
    }
}

WeightedDataset generate_dataset(const MixtureSpec& spec, uint64_t seed) {
    spec.validate();
    std::vector<double> data;
    data.reserve(spec.total_count() * spec.dim);
    for (std::size_t c = 0; c < spec.components.size(); ++c) {
        const auto& component = spec.components[c];
        Rng rng(mix_seed(seed, 0x6E4u, c));
        for (uint64_t i = 0; i < component.count; ++i)
            for (std::size_t d = 0; d < spec.dim; ++d)
                data.push_back(component.mean[d] + component.sigma * rng.normal());
    }
    return WeightedDataset(std::move(data), spec.dim);
}

MixtureSpec mixture_from_json(const std::string& text) {
    const nlohmann::json parsed = nlohmann::json::parse(text);
    MixtureSpec spec;
    spec.dim = parsed.at("d").get<std::size_t>();
    for (const auto& entry : parsed.at("components")) {
        MixtureSpec::Component component;
        component.mean = entry.at("mean").get<std::vector<double>>();
        component.sigma = entry.at("sigma").get<double>();
        component.count = entry.at("count").get<uint64_t>();
        spec.components.push_back(std::move(component));
    }
    spec.validate();
    return spec;
}

std::string mixture_to_json(const MixtureSpec& spec) {
    nlohmann::json out;
    out["d"] = spec.dim;
    out["components"] = nlohmann::json::array();
    for (const auto& c : spec.components) {
        nlohmann::json entry;
        entry["mean"] = c.mean;
        entry["sigma"] = c.sigma;
        entry["count"] = c.count;
        out["components"].push_back(entry);
    }
    return out.dump();
}

WeightedDataset heavy_tailed_cloud(std::size_t n, std::size_t dim, uint64_t seed) {
    if (n == 0 || dim == 0)
        throw std::invalid_argument("cloud needs positive size and dimension");
    Rng rng(mix_seed(seed, 0x9A2E70u));
    std::vector<double> data;
    data.reserve(n * dim);
    std::vector<double> direction(dim);
    for (std::size_t i = 0; i < n; ++i) {
        double u = rng.uniform();
        while (u <= 0.0) u = rng.uniform();
        const double radius = 1.0 / u;
        double norm2 = 0.0;
        for (double& c : direction) {
            c = rng.normal();
            norm2 += c * c;
        }
        const double scale = norm2 > 0.0 ? radius / std::sqrt(norm2) : 0.0;
        for (double c : direction) data.push_back(c * scale);
    }
    return WeightedDataset(std::move(data), dim);
}

WeightedDataset shuffle_dataset(const WeightedDataset& x, uint64_t seed) {
    std::vector<std::size_t> order(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(mix_seed(seed, 0x5F0Fu));
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);
    std::vector<double> data;
    data.reserve(x.size() * x.dim());
    std::vector<uint64_t> weights;
    weights.reserve(x.size());
    for (std::size_t i : order) {
        const auto p = x.point(i);
        data.insert(data.end(), p.begin(), p.end());
        weights.push_back(x.weight(i));
    }
    return WeightedDataset(std::move(data), x.dim(), std::move(weights));
}

}  // namespace fkm
