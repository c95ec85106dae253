#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "relsig/rational.hpp"

namespace relsig {

/// Components are 0-based internally (external formats are 1-based; the DSL
/// layer translates). A subset of [n] is a bitmask with bit i set when
/// component i is present.
using SubsetMask = std::uint32_t;

/// Largest supported component count for dense truth tables. An engineering
/// cap, not a theoretical bound.
inline constexpr unsigned kMaxComponents = 24;

/// A Boolean structure function on subsets of [n], stored as a packed truth
/// table over all 2^n subsets. Immutable after construction through the
/// public factory functions; semicoherence (monotone, 0 at the empty set,
/// 1 at the full set) is a property to be checked, not an invariant of the
/// representation, since non-monotone tables are needed for testing.
class StructureFunction {
  public:
    /// All-zero table on n components.
    explicit StructureFunction(unsigned n);

    unsigned component_count() const { return n_; }
    SubsetMask full_mask() const { return (SubsetMask{1} << n_) - 1; }
    std::size_t table_size() const { return std::size_t{1} << n_; }

    bool operator()(SubsetMask subset) const {
        return (bits_[subset >> 6] >> (subset & 63)) & 1;
    }
    void set(SubsetMask subset, bool value);

    bool operator==(const StructureFunction& other) const = default;

  private:
    unsigned n_;
    std::vector<std::uint64_t> bits_;
};

/// An ordered partition of [n] into nonempty disjoint blocks C_1,...,C_r.
class Partition {
  public:
    /// Blocks given as component-index lists (0-based). Validates coverage
    /// and disjointness; throws std::invalid_argument on violation.
    Partition(unsigned n, std::vector<std::vector<unsigned>> blocks);

    unsigned component_count() const { return n_; }
    unsigned block_count() const { return static_cast<unsigned>(blocks_.size()); }
    const std::vector<unsigned>& block(unsigned j) const { return blocks_[j]; }
    SubsetMask block_mask(unsigned j) const { return masks_[j]; }
    unsigned block_size(unsigned j) const { return static_cast<unsigned>(blocks_[j].size()); }

    /// Sizes (n_1,...,n_r).
    std::vector<unsigned> block_sizes() const;

    /// Per-block intersection cardinalities (|A ∩ C_1|,...,|A ∩ C_r|).
    std::vector<unsigned> block_counts(SubsetMask subset) const;

  private:
    unsigned n_;
    std::vector<std::vector<unsigned>> blocks_;
    std::vector<SubsetMask> masks_;
};

/// A system assembled from modules: an organizer structure on r positions
/// and one structure function per partition block.
struct ModularSystem {
    Partition partition;
    std::vector<StructureFunction> modules;
    StructureFunction organizer;
};

/// Series system: works only when every component works.
StructureFunction make_series(unsigned n);

/// Parallel system: works when any component works.
StructureFunction make_parallel(unsigned n);

/// Works when at least k of the n components work.
StructureFunction make_k_out_of_n(unsigned k, unsigned n);

/// Indicator that all components of B work. B must be nonempty.
StructureFunction conjunction_structure(SubsetMask b, unsigned n);

/// Monotone with value 0 at the empty set and 1 at the full set.
bool is_semicoherent(const StructureFunction& phi);

/// chi^d(A) = 1 - chi([n] \ A). An involution; preserves semicoherence.
StructureFunction dual(const StructureFunction& chi);

/// phi(A) = psi(chi_1(A ∩ C_1),...,chi_r(A ∩ C_r)) for every A.
/// Throws std::invalid_argument on block/arity size mismatches.
StructureFunction compose(const ModularSystem& system);

/// The multilinear polynomial agreeing with chi on Boolean vertices,
/// evaluated at z. Throws on dimension mismatch. The rational overload is
/// exact; the double overload serves the Monte Carlo layer.
Rational multilinear_extension(const StructureFunction& chi, const std::vector<Rational>& z);
double multilinear_extension(const StructureFunction& chi, const std::vector<double>& z);

/// Next subset with the same popcount in ascending mask order (Gosper).
/// Caller stops once the result exceeds full_mask.
inline SubsetMask next_same_popcount(SubsetMask mask) {
    SubsetMask low = mask & (~mask + 1);
    SubsetMask ripple = mask + low;
    return ripple | (((mask ^ ripple) >> 2) / low);
}

/// Invoke fn(mask) for every subset of [n] with exactly k elements.
template <typename Fn>
void for_each_subset_of_size(unsigned n, unsigned k, Fn&& fn) {
    if (k > n) return;
    if (k == 0) {
        fn(SubsetMask{0});
        return;
    }
    SubsetMask mask = (SubsetMask{1} << k) - 1;
    SubsetMask limit = SubsetMask{1} << n;
    while (mask < limit) {
        fn(mask);
        if (mask == 0) break;
        mask = next_same_popcount(mask);
    }
}

}  // namespace relsig
