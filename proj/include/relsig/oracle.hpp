#pragma once

#include <cstdint>
#include <vector>

#include "relsig/quality.hpp"
#include "relsig/signatures.hpp"
#include "relsig/structure.hpp"

namespace relsig {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter) through a SplitMix64-style mix, so trial t of a
/// run is reproducible regardless of evaluation order or threading.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double next_double();
    /// Standard exponential via inverse transform.
    double next_exponential();

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

/// Continuous lifetime samplers; marginals are continuous so ties occur with
/// probability zero (exact ties in doubles trigger a resample).
struct LifetimeSampler {
    enum class Kind {
        /// Independent standard exponentials.
        IidContinuous,
        /// Blocks of common-shock components: T_i = Z_block + E_i with all
        /// shocks and noises independent exponentials. Within a block the
        /// lifetimes are exchangeable; blocks are mutually independent.
        BlockProduct,
    };

    Kind kind = Kind::IidContinuous;
    unsigned n = 0;
    /// Block component lists for BlockProduct (0-based, disjoint, covering).
    std::vector<std::vector<unsigned>> blocks;

    static LifetimeSampler iid(unsigned n);
    static LifetimeSampler block_product(std::vector<std::vector<unsigned>> blocks);
    /// Pairs ({0,1}, {2,3}, ...); n must be even.
    static LifetimeSampler exchangeable_pairs(unsigned n);

    /// One draw of all n lifetimes using the given stream.
    std::vector<double> sample(CounterRng& rng) const;
};

/// Exact signature straight from the definition: walk each failure order,
/// find the failure that kills the system, accumulate the order's mass.
/// Independent of the subset-sum formula it cross-checks.
SignatureVector brute_force_signature(const StructureFunction& phi, const OrderDistribution& dist);

struct MonteCarloResult {
    std::vector<double> estimates;
    std::vector<double> std_errors;
    std::uint64_t trials = 0;
    /// Trials redrawn because two sampled lifetimes compared exactly equal.
    std::uint64_t resamples = 0;
};

MonteCarloResult monte_carlo_signature(const StructureFunction& phi, const LifetimeSampler& sampler,
                                       std::uint64_t trials, std::uint64_t seed);

/// Empirical ordering frequencies as exact fractions count/trials.
OrderDistribution order_distribution_of(const LifetimeSampler& sampler, std::uint64_t trials,
                                        std::uint64_t seed);

}  // namespace relsig
