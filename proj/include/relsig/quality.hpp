#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "relsig/rational.hpp"
#include "relsig/structure.hpp"

namespace relsig {

/// Dense permutation storage caps n! at 8! = 40320 entries.
inline constexpr unsigned kMaxOrderComponents = 8;

/// Permutations of [n] are 0-based index vectors; element 0 is the component
/// that fails first. Ranking is lexicographic.
std::size_t permutation_rank(const std::vector<unsigned>& perm);
std::vector<unsigned> permutation_unrank(unsigned n, std::size_t rank);

/// Exact probability mass over the n! failure orders of the components.
/// Stands in for the joint lifetime law under the no-ties assumption.
class OrderDistribution {
  public:
    /// All-zero masses; fill with set_mass and validate().
    explicit OrderDistribution(unsigned n);

    static OrderDistribution uniform(unsigned n);

    /// Independent blocks, each exchangeable, with every interleaving of the
    /// blocks equally likely. Realizes the independent-exchangeable-blocks
    /// construction at the ordering level.
    static OrderDistribution block_product(const Partition& partition);

    /// As above but with a caller-supplied weight per interleaving pattern.
    /// A pattern lists, position by position, which block the failure at that
    /// position belongs to; weights are normalized over all patterns.
    static OrderDistribution block_product(const Partition& partition,
                                           const std::vector<Rational>& pattern_weights);

    unsigned component_count() const { return n_; }
    std::size_t permutation_count() const { return mass_.size(); }

    const Rational& mass(std::size_t rank) const { return mass_[rank]; }
    const Rational& mass(const std::vector<unsigned>& perm) const {
        return mass_[permutation_rank(perm)];
    }
    void set_mass(const std::vector<unsigned>& perm, Rational value);

    /// Throws std::invalid_argument unless masses are nonnegative and sum to 1.
    void validate() const;

    /// Pushforward under a component relabeling pi: the mass of sigma moves
    /// to pi∘sigma.
    OrderDistribution relabeled(const std::vector<unsigned>& pi) const;

    bool operator==(const OrderDistribution& other) const = default;

  private:
    unsigned n_;
    std::vector<Rational> mass_;
};

/// Exact map q on subsets of [n]: q(A) is the probability that the best |A|
/// components are exactly those in A, with q(empty) = q(full) = 1 and unit
/// sums over each cardinality level.
class RelativeQualityFunction {
  public:
    RelativeQualityFunction(unsigned n, std::vector<Rational> values);

    unsigned component_count() const { return n_; }
    const Rational& operator()(SubsetMask subset) const { return values_[subset]; }

    /// Checks both defining invariants; throws std::invalid_argument.
    void validate() const;

    bool operator==(const RelativeQualityFunction& other) const = default;

  private:
    unsigned n_;
    std::vector<Rational> values_;
};

/// The coefficient function c̃ on the grid prod_j {0,...,n_j}, stored densely
/// in mixed-radix order. Restricted to each level T_k it is a probability
/// distribution when extracted from a decomposable q.
class DecompositionCoefficients {
  public:
    explicit DecompositionCoefficients(std::vector<unsigned> block_sizes);

    const std::vector<unsigned>& block_sizes() const { return sizes_; }
    std::size_t cell_count() const { return values_.size(); }

    const Rational& at(const std::vector<unsigned>& counts) const { return values_[index(counts)]; }
    void set(const std::vector<unsigned>& counts, Rational value) {
        values_[index(counts)] = std::move(value);
    }

    /// Per-level normalization check (unit sum over every T_k) plus
    /// nonnegativity; throws std::invalid_argument on violation.
    void validate() const;

  private:
    std::size_t index(const std::vector<unsigned>& counts) const;

    std::vector<unsigned> sizes_;
    std::vector<Rational> values_;
};

/// Invoke fn(counts) for every cell of T_k = {a : 0 <= a_j <= n_j,
/// sum a_j = k}, in lexicographic order.
void for_each_level_cell(const std::vector<unsigned>& block_sizes, unsigned level,
                         const std::function<void(const std::vector<unsigned>&)>& fn);

/// Outcome of a decomposability check: either the extracted coefficients or
/// a witness subset where the product form fails.
struct DecompositionCheck {
    std::optional<DecompositionCoefficients> coefficients;
    std::optional<SubsetMask> counterexample;

    bool decomposable() const { return coefficients.has_value(); }
};

/// q(A) = total mass of permutations whose last |A| entries are exactly A.
RelativeQualityFunction q_from_order_distribution(const OrderDistribution& dist);

/// The fully symmetric quality function q(A) = 1/C(n,|A|).
RelativeQualityFunction q_symmetric(unsigned n);

/// Quality function of the components in `block`, re-indexed to 0..|block|-1
/// in ascending component order, under the ordering law induced by dist.
RelativeQualityFunction marginal_quality(const OrderDistribution& dist,
                                         const std::vector<unsigned>& block);

/// q(A) = 1/C(n,|A|) for every A, exactly.
bool is_symmetric(const RelativeQualityFunction& q);

/// q(A) depends only on the per-block cardinalities |A ∩ C_j|.
bool is_partition_symmetric(const RelativeQualityFunction& q, const Partition& partition);

/// Whether the ordering law is invariant under every partition-preserving
/// component relabeling. Only within-block transpositions of consecutive
/// members are tested; they generate the full partition-preserving group.
bool is_partition_exchangeable(const OrderDistribution& dist, const Partition& partition);

/// Tests q(A) = c̃(|A_1|,...,|A_r|) * prod_j marginals[j](A_j) for all A,
/// extracting c̃ from the first witness per grid cell with a nonzero
/// denominator. Cells where every witness has a zero product require q = 0
/// across the cell (no finite coefficient could work otherwise).
DecompositionCheck check_decomposable(const RelativeQualityFunction& q,
                                      const std::vector<RelativeQualityFunction>& marginals,
                                      const Partition& partition);

/// Pr(E_{k,a}) = sum of q(A) over subsets with the given per-block counts.
Rational event_probability(const RelativeQualityFunction& q, const Partition& partition,
                           const std::vector<unsigned>& counts);

/// The multivariate hypergeometric weights C(n_1,a_1)...C(n_r,a_r)/C(n,k).
DecompositionCoefficients hypergeometric_coefficients(const Partition& partition);

}  // namespace relsig
