#ifndef FKM_COMMON_HPP
#define FKM_COMMON_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace fkm {

/// Numeric tolerances shared across the library.
struct tol {
    /// Membership rows must sum to 1 within this bound.
    static constexpr double row_sum = 1e-12;
    /// Slack for cost comparisons and decomposition identities.
    static constexpr double cost = 1e-9;
};

/// Thrown when an enumeration or grid exceeds its configured budget.
class infeasible_error : public std::runtime_error {
public:
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

uint64_t splitmix64(uint64_t x);

/// Derives an independent seed from a master seed and up to three stream tags.
uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0);

/// mt19937_64 engine with portable value mappings. The engine's output
/// sequence is pinned by the standard; std:: distributions are not, so the
/// uniform/normal/integer mappings are implemented here.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller.
    double normal();

    /// Uniform integer in [0, n), n >= 1.
    uint64_t below(uint64_t n);

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Worker count honoring the FUZZY_CORESET_THREADS env var (0 or unset = auto).
std::size_t max_threads();

/// Runs f(i) for i in [0, n). Items must write only to their own slots; the
/// result layout is independent of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace fkm

#endif
