#include "relsig/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace relsig {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Failure index: the count of removals after which the structure first
/// reports failure, components removed in the order given.
unsigned failure_index(const StructureFunction& phi, const std::vector<unsigned>& order) {
    SubsetMask alive = phi.full_mask();
    for (unsigned k = 0; k < order.size(); ++k) {
        alive &= ~(SubsetMask{1} << order[k]);
        if (!phi(alive)) return k + 1;
    }
    return static_cast<unsigned>(order.size());
}

}  // namespace

std::uint64_t CounterRng::next_u64() {
    return mix64(mix64(mix64(seed_) ^ stream_) ^ counter_++);
}

double CounterRng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_exponential() {
    return -std::log1p(-next_double());
}

LifetimeSampler LifetimeSampler::iid(unsigned n) {
    LifetimeSampler sampler;
    sampler.kind = Kind::IidContinuous;
    sampler.n = n;
    return sampler;
}

LifetimeSampler LifetimeSampler::block_product(std::vector<std::vector<unsigned>> blocks) {
    LifetimeSampler sampler;
    sampler.kind = Kind::BlockProduct;
    unsigned n = 0;
    for (const auto& block : blocks) n += static_cast<unsigned>(block.size());
    sampler.n = n;
    sampler.blocks = std::move(blocks);
    // Reuse partition validation (disjoint, nonempty, covering).
    Partition check(n, sampler.blocks);
    return sampler;
}

LifetimeSampler LifetimeSampler::exchangeable_pairs(unsigned n) {
    if (n % 2 != 0) throw std::invalid_argument("pair sampler needs an even component count");
    std::vector<std::vector<unsigned>> blocks;
    for (unsigned i = 0; i < n; i += 2) blocks.push_back({i, i + 1});
    return block_product(std::move(blocks));
}

std::vector<double> LifetimeSampler::sample(CounterRng& rng) const {
    std::vector<double> lifetimes(n);
    if (kind == Kind::IidContinuous) {
        for (double& t : lifetimes) t = rng.next_exponential();
    } else {
        for (const auto& block : blocks) {
            double shock = rng.next_exponential();
            for (unsigned i : block) lifetimes[i] = shock + rng.next_exponential();
        }
    }
    return lifetimes;
}

SignatureVector brute_force_signature(const StructureFunction& phi, const OrderDistribution& dist) {
    unsigned n = phi.component_count();
    if (dist.component_count() != n)
        throw std::invalid_argument("structure and distribution sizes differ");
    SignatureVector signature;
    signature.entries.assign(n, Rational{0});
    for (std::size_t rank = 0; rank < dist.permutation_count(); ++rank) {
        const Rational& mass = dist.mass(rank);
        if (mass == 0) continue;
        auto order = permutation_unrank(n, rank);
        signature.entries[failure_index(phi, order) - 1] += mass;
    }
    return signature;
}

MonteCarloResult monte_carlo_signature(const StructureFunction& phi, const LifetimeSampler& sampler,
                                       std::uint64_t trials, std::uint64_t seed) {
    if (sampler.n != phi.component_count())
        throw std::invalid_argument("structure and sampler sizes differ");
    if (trials == 0) throw std::invalid_argument("at least one trial required");

    unsigned n = sampler.n;
    std::vector<std::uint64_t> tally(n, 0);
    std::uint64_t resamples = 0;
    std::vector<unsigned> order(n);
    for (std::uint64_t t = 0; t < trials; ++t) {
        CounterRng rng(seed, t);
        for (;;) {
            auto lifetimes = sampler.sample(rng);
            std::iota(order.begin(), order.end(), 0u);
            std::sort(order.begin(), order.end(),
                      [&](unsigned a, unsigned b) { return lifetimes[a] < lifetimes[b]; });
            bool tied = false;
            for (unsigned i = 0; i + 1 < n; ++i)
                if (lifetimes[order[i]] == lifetimes[order[i + 1]]) tied = true;
            if (!tied) break;
            ++resamples;
        }
        ++tally[failure_index(phi, order) - 1];
    }

    MonteCarloResult result;
    result.trials = trials;
    result.resamples = resamples;
    for (unsigned k = 0; k < n; ++k) {
        double p = static_cast<double>(tally[k]) / static_cast<double>(trials);
        result.estimates.push_back(p);
        result.std_errors.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(trials)));
    }
    return result;
}

OrderDistribution order_distribution_of(const LifetimeSampler& sampler, std::uint64_t trials,
                                        std::uint64_t seed) {
    if (sampler.n > kMaxOrderComponents)
        throw std::invalid_argument("dense order storage caps the sampler at " +
                                    std::to_string(kMaxOrderComponents) + " components");
    if (trials == 0) throw std::invalid_argument("at least one trial required");

    unsigned n = sampler.n;
    OrderDistribution dist(n);
    std::vector<std::uint64_t> counts(dist.permutation_count(), 0);
    std::vector<unsigned> order(n);
    for (std::uint64_t t = 0; t < trials; ++t) {
        CounterRng rng(seed, t);
        for (;;) {
            auto lifetimes = sampler.sample(rng);
            std::iota(order.begin(), order.end(), 0u);
            std::sort(order.begin(), order.end(),
                      [&](unsigned a, unsigned b) { return lifetimes[a] < lifetimes[b]; });
            bool tied = false;
            for (unsigned i = 0; i + 1 < n; ++i)
                if (lifetimes[order[i]] == lifetimes[order[i + 1]]) tied = true;
            if (!tied) break;
        }
        ++counts[permutation_rank(order)];
    }
    std::vector<unsigned> perm;
    for (std::size_t rank = 0; rank < counts.size(); ++rank) {
        if (counts[rank] == 0) continue;
        perm = permutation_unrank(n, rank);
        dist.set_mass(perm, Rational(counts[rank], trials));
    }
    return dist;
}

}  // namespace relsig
