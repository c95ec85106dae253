#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "relsig/modular.hpp"
#include "relsig/oracle.hpp"
#include "relsig/quality.hpp"
#include "relsig/signatures.hpp"
#include "relsig/structure.hpp"

namespace relsig::test {

using Rng = std::mt19937_64;

/// Random semicoherent structure: upward closure of a few random nonempty
/// path sets.
inline StructureFunction random_semicoherent(unsigned n, Rng& rng) {
    StructureFunction phi(n);
    std::uniform_int_distribution<SubsetMask> subsets(1, phi.full_mask());
    std::uniform_int_distribution<unsigned> path_count(1, 3);
    std::vector<SubsetMask> paths;
    for (unsigned i = path_count(rng); i > 0; --i) paths.push_back(subsets(rng));
    for (SubsetMask a = 0; a <= phi.full_mask(); ++a)
        for (SubsetMask path : paths)
            if ((a & path) == path) {
                phi.set(a, true);
                break;
            }
    return phi;
}

/// Random truth table, not necessarily monotone.
inline StructureFunction random_table(unsigned n, Rng& rng) {
    StructureFunction phi(n);
    std::bernoulli_distribution coin;
    for (SubsetMask a = 0; a <= phi.full_mask(); ++a) phi.set(a, coin(rng));
    return phi;
}

/// Random order distribution with strictly positive rational masses.
inline OrderDistribution random_order_distribution(unsigned n, Rng& rng) {
    OrderDistribution dist(n);
    std::uniform_int_distribution<unsigned> weight(1, 100);
    std::vector<unsigned> weights(dist.permutation_count());
    unsigned long total = 0;
    for (unsigned& w : weights) total += (w = weight(rng));
    for (std::size_t rank = 0; rank < weights.size(); ++rank)
        dist.set_mass(permutation_unrank(n, rank), Rational(weights[rank], total));
    return dist;
}

/// Random partition of [n] into at most max_blocks nonempty blocks.
inline Partition random_partition(unsigned n, unsigned max_blocks, Rng& rng) {
    std::uniform_int_distribution<unsigned> block_count(1, std::min(n, max_blocks));
    unsigned r = block_count(rng);
    std::vector<std::vector<unsigned>> blocks(r);
    std::vector<unsigned> order(n);
    for (unsigned i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    // First r components seed the blocks so none is empty.
    std::uniform_int_distribution<unsigned> pick(0, r - 1);
    for (unsigned j = 0; j < r; ++j) blocks[j].push_back(order[j]);
    for (unsigned i = r; i < n; ++i) blocks[pick(rng)].push_back(order[i]);
    return Partition(n, std::move(blocks));
}

/// Random partition-exchangeable distribution: independent exchangeable
/// blocks with random interleaving weights. Exchangeability at the ordering
/// level is exactly "mass depends only on the interleaving pattern".
inline OrderDistribution random_block_exchangeable(const Partition& partition, Rng& rng) {
    // Pattern count is the multinomial coefficient n! / prod n_j!.
    BigInt patterns = factorial(partition.component_count());
    for (unsigned j = 0; j < partition.block_count(); ++j)
        patterns /= factorial(partition.block_size(j));
    std::size_t count = patterns.convert_to<std::size_t>();
    std::uniform_int_distribution<unsigned> weight(1, 50);
    std::vector<Rational> weights;
    weights.reserve(count);
    for (std::size_t i = 0; i < count; ++i) weights.emplace_back(weight(rng));
    return OrderDistribution::block_product(partition, weights);
}

/// The worked four-component distribution: mass 1/18 on orders where
/// component 1 fails before component 2, 1/36 otherwise.
inline OrderDistribution example_order_distribution() {
    OrderDistribution dist(4);
    for (std::size_t rank = 0; rank < dist.permutation_count(); ++rank) {
        auto perm = permutation_unrank(4, rank);
        unsigned pos1 = 0, pos2 = 0;
        for (unsigned t = 0; t < 4; ++t) {
            if (perm[t] == 0) pos1 = t;
            if (perm[t] == 1) pos2 = t;
        }
        dist.set_mass(perm, pos1 < pos2 ? Rational{1, 18} : Rational{1, 36});
    }
    return dist;
}

/// Five-component bridge: path sets {1,4}, {2,5}, {1,3,5}, {2,3,4} (1-based).
inline StructureFunction bridge_structure() {
    StructureFunction phi(5);
    const SubsetMask paths[] = {0b01001, 0b10010, 0b10101, 0b01110};
    for (SubsetMask a = 0; a <= phi.full_mask(); ++a)
        for (SubsetMask path : paths)
            if ((a & path) == path) {
                phi.set(a, true);
                break;
            }
    return phi;
}

/// Four-component example structure min(x1, x4, max(x2, x3)).
inline StructureFunction phi1_structure() {
    StructureFunction phi(4);
    for (SubsetMask a = 0; a <= phi.full_mask(); ++a) {
        bool x1 = a & 1, x2 = a & 2, x3 = a & 4, x4 = a & 8;
        phi.set(a, x1 && x4 && (x2 || x3));
    }
    return phi;
}

/// All semicoherent structures on n components (feasible for n <= 4).
inline std::vector<StructureFunction> all_semicoherent(unsigned n) {
    std::vector<StructureFunction> result;
    std::size_t tables = std::size_t{1} << (std::size_t{1} << n);
    for (std::size_t bits = 0; bits < tables; ++bits) {
        StructureFunction phi(n);
        for (SubsetMask a = 0; a <= phi.full_mask(); ++a)
            phi.set(a, (bits >> a) & 1);
        if (is_semicoherent(phi)) result.push_back(std::move(phi));
    }
    return result;
}

}  // namespace relsig::test
