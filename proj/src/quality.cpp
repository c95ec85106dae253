#include "relsig/quality.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace relsig {

std::size_t permutation_rank(const std::vector<unsigned>& perm) {
    std::size_t rank = 0;
    unsigned n = static_cast<unsigned>(perm.size());
    for (unsigned i = 0; i < n; ++i) {
        unsigned smaller = 0;
        for (unsigned j = i + 1; j < n; ++j)
            if (perm[j] < perm[i]) ++smaller;
        rank = rank * (n - i) + smaller;
    }
    return rank;
}

std::vector<unsigned> permutation_unrank(unsigned n, std::size_t rank) {
    std::vector<unsigned> lehmer(n, 0);
    for (unsigned i = n; i > 0; --i) {
        lehmer[i - 1] = static_cast<unsigned>(rank % (n - i + 1));
        rank /= n - i + 1;
    }
    std::vector<unsigned> pool(n);
    for (unsigned i = 0; i < n; ++i) pool[i] = i;
    std::vector<unsigned> perm;
    perm.reserve(n);
    for (unsigned i = 0; i < n; ++i) {
        perm.push_back(pool[lehmer[i]]);
        pool.erase(pool.begin() + lehmer[i]);
    }
    return perm;
}

OrderDistribution::OrderDistribution(unsigned n) : n_(n) {
    if (n == 0 || n > kMaxOrderComponents)
        throw std::invalid_argument("order distribution supports 1 to " +
                                    std::to_string(kMaxOrderComponents) + " components");
    std::size_t count = 1;
    for (unsigned i = 2; i <= n; ++i) count *= i;
    mass_.assign(count, Rational{0});
}

OrderDistribution OrderDistribution::uniform(unsigned n) {
    OrderDistribution dist(n);
    Rational share{1, static_cast<unsigned long>(dist.mass_.size())};
    std::fill(dist.mass_.begin(), dist.mass_.end(), share);
    return dist;
}

namespace {

std::vector<std::vector<unsigned>> interleaving_patterns(const Partition& partition) {
    std::vector<unsigned> labels;
    for (unsigned j = 0; j < partition.block_count(); ++j)
        labels.insert(labels.end(), partition.block_size(j), j);
    std::vector<std::vector<unsigned>> patterns;
    do {
        patterns.push_back(labels);
    } while (std::next_permutation(labels.begin(), labels.end()));
    return patterns;
}

}  // namespace

OrderDistribution OrderDistribution::block_product(const Partition& partition) {
    std::size_t count = interleaving_patterns(partition).size();
    return block_product(partition, std::vector<Rational>(count, Rational{1}));
}

OrderDistribution OrderDistribution::block_product(const Partition& partition,
                                                   const std::vector<Rational>& pattern_weights) {
    auto patterns = interleaving_patterns(partition);
    if (pattern_weights.size() != patterns.size())
        throw std::invalid_argument("one weight per interleaving pattern required");
    Rational total{0};
    std::map<std::vector<unsigned>, std::size_t> pattern_index;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        if (pattern_weights[i] < 0) throw std::invalid_argument("pattern weights must be nonnegative");
        total += pattern_weights[i];
        pattern_index[patterns[i]] = i;
    }
    if (total == 0) throw std::invalid_argument("pattern weights must not all vanish");

    unsigned n = partition.component_count();
    std::vector<unsigned> block_of(n);
    for (unsigned j = 0; j < partition.block_count(); ++j)
        for (unsigned i : partition.block(j)) block_of[i] = j;
    Rational within{1};
    for (unsigned j = 0; j < partition.block_count(); ++j)
        within /= Rational(factorial(partition.block_size(j)));

    OrderDistribution dist(n);
    std::vector<unsigned> pattern(n);
    for (std::size_t rank = 0; rank < dist.mass_.size(); ++rank) {
        auto perm = permutation_unrank(n, rank);
        for (unsigned t = 0; t < n; ++t) pattern[t] = block_of[perm[t]];
        dist.mass_[rank] = pattern_weights[pattern_index.at(pattern)] / total * within;
    }
    return dist;
}

void OrderDistribution::set_mass(const std::vector<unsigned>& perm, Rational value) {
    if (perm.size() != n_) throw std::invalid_argument("permutation length mismatch");
    mass_[permutation_rank(perm)] = std::move(value);
}

void OrderDistribution::validate() const {
    Rational total{0};
    for (const Rational& m : mass_) {
        if (m < 0) throw std::invalid_argument("order distribution mass must be nonnegative");
        total += m;
    }
    if (total != 1) throw std::invalid_argument("order distribution masses must sum to 1");
}

OrderDistribution OrderDistribution::relabeled(const std::vector<unsigned>& pi) const {
    if (pi.size() != n_) throw std::invalid_argument("relabeling length mismatch");
    OrderDistribution result(n_);
    std::vector<unsigned> image(n_);
    for (std::size_t rank = 0; rank < mass_.size(); ++rank) {
        if (mass_[rank] == 0) continue;
        auto perm = permutation_unrank(n_, rank);
        for (unsigned i = 0; i < n_; ++i) image[i] = pi[perm[i]];
        result.mass_[permutation_rank(image)] += mass_[rank];
    }
    return result;
}

RelativeQualityFunction::RelativeQualityFunction(unsigned n, std::vector<Rational> values)
    : n_(n), values_(std::move(values)) {
    if (n == 0 || n > kMaxComponents) throw std::invalid_argument("invalid component count");
    if (values_.size() != (std::size_t{1} << n))
        throw std::invalid_argument("quality function needs one value per subset");
}

void RelativeQualityFunction::validate() const {
    SubsetMask full = (SubsetMask{1} << n_) - 1;
    if (values_[0] != 1 || values_[full] != 1)
        throw std::invalid_argument("q must equal 1 at the empty and full sets");
    for (unsigned k = 0; k <= n_; ++k) {
        Rational level{0};
        for_each_subset_of_size(n_, k, [&](SubsetMask a) {
            if (values_[a] < 0) throw std::invalid_argument("q values must be nonnegative");
            level += values_[a];
        });
        if (level != 1) throw std::invalid_argument("q level sums must equal 1");
    }
}

DecompositionCoefficients::DecompositionCoefficients(std::vector<unsigned> block_sizes)
    : sizes_(std::move(block_sizes)) {
    std::size_t cells = 1;
    for (unsigned size : sizes_) cells *= size + 1;
    values_.assign(cells, Rational{0});
}

std::size_t DecompositionCoefficients::index(const std::vector<unsigned>& counts) const {
    if (counts.size() != sizes_.size()) throw std::invalid_argument("count vector arity mismatch");
    std::size_t idx = 0;
    for (std::size_t j = 0; j < sizes_.size(); ++j) {
        if (counts[j] > sizes_[j]) throw std::invalid_argument("count exceeds block size");
        idx = idx * (sizes_[j] + 1) + counts[j];
    }
    return idx;
}

void DecompositionCoefficients::validate() const {
    for (const Rational& v : values_)
        if (v < 0) throw std::invalid_argument("coefficients must be nonnegative");
    unsigned n = 0;
    for (unsigned size : sizes_) n += size;
    for (unsigned k = 0; k <= n; ++k) {
        Rational level{0};
        for_each_level_cell(sizes_, k, [&](const std::vector<unsigned>& a) { level += at(a); });
        if (level != 1) throw std::invalid_argument("coefficient level sums must equal 1");
    }
}

void for_each_level_cell(const std::vector<unsigned>& block_sizes, unsigned level,
                         const std::function<void(const std::vector<unsigned>&)>& fn) {
    std::vector<unsigned> cell(block_sizes.size(), 0);
    auto recurse = [&](auto&& self, std::size_t j, unsigned remaining) -> void {
        if (j == block_sizes.size()) {
            if (remaining == 0) fn(cell);
            return;
        }
        unsigned tail = 0;
        for (std::size_t t = j + 1; t < block_sizes.size(); ++t) tail += block_sizes[t];
        unsigned low = remaining > tail ? remaining - tail : 0;
        unsigned high = std::min(block_sizes[j], remaining);
        for (unsigned a = low; a <= high; ++a) {
            cell[j] = a;
            self(self, j + 1, remaining - a);
        }
    };
    recurse(recurse, 0, level);
}

RelativeQualityFunction q_from_order_distribution(const OrderDistribution& dist) {
    unsigned n = dist.component_count();
    std::vector<Rational> values(std::size_t{1} << n, Rational{0});
    for (std::size_t rank = 0; rank < dist.permutation_count(); ++rank) {
        const Rational& m = dist.mass(rank);
        if (m == 0) continue;
        auto perm = permutation_unrank(n, rank);
        SubsetMask top = 0;
        values[top] += m;
        for (unsigned k = 1; k <= n; ++k) {
            top |= SubsetMask{1} << perm[n - k];
            values[top] += m;
        }
    }
    return RelativeQualityFunction(n, std::move(values));
}

RelativeQualityFunction q_symmetric(unsigned n) {
    std::vector<Rational> values(std::size_t{1} << n);
    for (SubsetMask a = 0; a < values.size(); ++a)
        values[a] = Rational{1} / Rational(binomial(n, std::popcount(a)));
    return RelativeQualityFunction(n, std::move(values));
}

RelativeQualityFunction marginal_quality(const OrderDistribution& dist,
                                         const std::vector<unsigned>& block) {
    if (block.empty()) throw std::invalid_argument("marginal block must be nonempty");
    unsigned n = dist.component_count();
    std::vector<unsigned> sorted = block;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> local(n, -1);
    for (unsigned pos = 0; pos < sorted.size(); ++pos) {
        if (sorted[pos] >= n || local[sorted[pos]] != -1)
            throw std::invalid_argument("marginal block must be a set of valid components");
        local[sorted[pos]] = static_cast<int>(pos);
    }

    unsigned m = static_cast<unsigned>(sorted.size());
    std::vector<Rational> values(std::size_t{1} << m, Rational{0});
    std::vector<unsigned> induced;
    for (std::size_t rank = 0; rank < dist.permutation_count(); ++rank) {
        const Rational& mass = dist.mass(rank);
        if (mass == 0) continue;
        auto perm = permutation_unrank(n, rank);
        induced.clear();
        for (unsigned i : perm)
            if (local[i] != -1) induced.push_back(static_cast<unsigned>(local[i]));
        SubsetMask top = 0;
        values[top] += mass;
        for (unsigned k = 1; k <= m; ++k) {
            top |= SubsetMask{1} << induced[m - k];
            values[top] += mass;
        }
    }
    return RelativeQualityFunction(m, std::move(values));
}

bool is_symmetric(const RelativeQualityFunction& q) {
    unsigned n = q.component_count();
    SubsetMask full = (SubsetMask{1} << n) - 1;
    for (SubsetMask a = 0; a <= full; ++a)
        if (q(a) != Rational{1} / Rational(binomial(n, std::popcount(a)))) return false;
    return true;
}

bool is_partition_symmetric(const RelativeQualityFunction& q, const Partition& partition) {
    if (q.component_count() != partition.component_count())
        throw std::invalid_argument("partition and quality function sizes differ");
    // Group subsets by their per-block count vector; all members must agree.
    std::map<std::vector<unsigned>, Rational> representative;
    SubsetMask full = (SubsetMask{1} << q.component_count()) - 1;
    for (SubsetMask a = 0; a <= full; ++a) {
        auto counts = partition.block_counts(a);
        auto [it, inserted] = representative.emplace(std::move(counts), q(a));
        if (!inserted && it->second != q(a)) return false;
    }
    return true;
}

bool is_partition_exchangeable(const OrderDistribution& dist, const Partition& partition) {
    if (dist.component_count() != partition.component_count())
        throw std::invalid_argument("partition and distribution sizes differ");
    unsigned n = dist.component_count();
    std::vector<unsigned> identity(n);
    for (unsigned i = 0; i < n; ++i) identity[i] = i;
    for (unsigned j = 0; j < partition.block_count(); ++j) {
        std::vector<unsigned> members = partition.block(j);
        std::sort(members.begin(), members.end());
        // Consecutive transpositions within the block generate every
        // partition-preserving permutation together with the other blocks'.
        for (std::size_t t = 0; t + 1 < members.size(); ++t) {
            std::vector<unsigned> pi = identity;
            std::swap(pi[members[t]], pi[members[t + 1]]);
            if (!(dist.relabeled(pi) == dist)) return false;
        }
    }
    return true;
}

namespace {

/// Invoke fn(global_mask, product of marginal values) for every subset A
/// with |A ∩ C_j| = counts[j]; local_masks carries the per-block selections.
void for_each_counted_subset(const Partition& partition,
                             const std::vector<RelativeQualityFunction>& marginals,
                             const std::vector<unsigned>& counts,
                             const std::function<bool(SubsetMask, const Rational&)>& fn) {
    unsigned r = partition.block_count();
    std::vector<SubsetMask> chosen(r, 0);
    auto recurse = [&](auto&& self, unsigned j, SubsetMask acc, const Rational& prod) -> bool {
        if (j == r) return fn(acc, prod);
        bool keep_going = true;
        for_each_subset_of_size(partition.block_size(j), counts[j], [&](SubsetMask local) {
            if (!keep_going) return;
            SubsetMask global = 0;
            const auto& block = partition.block(j);
            for (unsigned pos = 0; pos < block.size(); ++pos)
                if (local & (SubsetMask{1} << pos)) global |= SubsetMask{1} << block[pos];
            keep_going = self(self, j + 1, acc | global, prod * marginals[j](local));
        });
        return keep_going;
    };
    recurse(recurse, 0, 0, Rational{1});
}

}  // namespace

DecompositionCheck check_decomposable(const RelativeQualityFunction& q,
                                      const std::vector<RelativeQualityFunction>& marginals,
                                      const Partition& partition) {
    unsigned r = partition.block_count();
    if (marginals.size() != r) throw std::invalid_argument("one marginal per block required");
    for (unsigned j = 0; j < r; ++j)
        if (marginals[j].component_count() != partition.block_size(j))
            throw std::invalid_argument("marginal size must match its block");
    if (q.component_count() != partition.component_count())
        throw std::invalid_argument("partition and quality function sizes differ");

    auto sizes = partition.block_sizes();
    DecompositionCoefficients coeffs(sizes);
    unsigned n = partition.component_count();
    for (unsigned k = 0; k <= n; ++k) {
        for_each_level_cell(sizes, k, [&](const std::vector<unsigned>& cell) {
            // First subset with a nonzero marginal product is the witness;
            // the global verification below catches witness disagreement.
            for_each_counted_subset(partition, marginals, cell,
                                    [&](SubsetMask a, const Rational& prod) {
                                        if (prod == 0) return true;
                                        coeffs.set(cell, q(a) / prod);
                                        return false;
                                    });
        });
    }

    // Verify the product form everywhere; zero products force q = 0 since no
    // finite coefficient can reproduce a nonzero q there.
    std::optional<SubsetMask> counterexample;
    std::vector<unsigned> local_pos(n, 0);
    for (unsigned j = 0; j < r; ++j) {
        const auto& block = partition.block(j);
        for (unsigned pos = 0; pos < block.size(); ++pos) local_pos[block[pos]] = pos;
    }
    SubsetMask full = (SubsetMask{1} << n) - 1;
    for (SubsetMask a = 0; a <= full && !counterexample; ++a) {
        Rational prod{1};
        for (unsigned j = 0; j < r; ++j) {
            SubsetMask local = 0;
            const auto& block = partition.block(j);
            for (unsigned pos = 0; pos < block.size(); ++pos)
                if (a & (SubsetMask{1} << block[pos])) local |= SubsetMask{1} << pos;
            prod *= marginals[j](local);
        }
        if (prod == 0) {
            if (q(a) != 0) counterexample = a;
        } else if (q(a) != coeffs.at(partition.block_counts(a)) * prod) {
            counterexample = a;
        }
    }

    DecompositionCheck result;
    if (counterexample)
        result.counterexample = counterexample;
    else
        result.coefficients = std::move(coeffs);
    return result;
}

Rational event_probability(const RelativeQualityFunction& q, const Partition& partition,
                           const std::vector<unsigned>& counts) {
    if (counts.size() != partition.block_count())
        throw std::invalid_argument("count vector arity mismatch");
    for (unsigned j = 0; j < partition.block_count(); ++j)
        if (counts[j] > partition.block_size(j))
            throw std::invalid_argument("count exceeds block size");
    Rational total{0};
    SubsetMask full = (SubsetMask{1} << q.component_count()) - 1;
    for (SubsetMask a = 0; a <= full; ++a)
        if (partition.block_counts(a) == counts) total += q(a);
    return total;
}

DecompositionCoefficients hypergeometric_coefficients(const Partition& partition) {
    auto sizes = partition.block_sizes();
    DecompositionCoefficients coeffs(sizes);
    unsigned n = partition.component_count();
    for (unsigned k = 0; k <= n; ++k) {
        for_each_level_cell(sizes, k, [&](const std::vector<unsigned>& cell) {
            Rational value{1};
            for (std::size_t j = 0; j < sizes.size(); ++j)
                value *= Rational(binomial(sizes[j], cell[j]));
            coeffs.set(cell, value / Rational(binomial(n, k)));
        });
    }
    return coeffs;
}

}  // namespace relsig
