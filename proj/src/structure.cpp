#include "relsig/structure.hpp"

#include <algorithm>
#include <bit>

namespace relsig {

StructureFunction::StructureFunction(unsigned n) : n_(n) {
    if (n == 0) throw std::invalid_argument("structure function needs at least one component");
    if (n > kMaxComponents)
        throw std::invalid_argument("component count " + std::to_string(n) + " exceeds cap " +
                                    std::to_string(kMaxComponents));
    bits_.assign((table_size() + 63) / 64, 0);
}

void StructureFunction::set(SubsetMask subset, bool value) {
    std::uint64_t bit = std::uint64_t{1} << (subset & 63);
    if (value)
        bits_[subset >> 6] |= bit;
    else
        bits_[subset >> 6] &= ~bit;
}

Partition::Partition(unsigned n, std::vector<std::vector<unsigned>> blocks)
    : n_(n), blocks_(std::move(blocks)) {
    if (n == 0 || n > kMaxComponents) throw std::invalid_argument("invalid component count");
    SubsetMask seen = 0;
    for (const auto& block : blocks_) {
        if (block.empty()) throw std::invalid_argument("partition block must be nonempty");
        SubsetMask mask = 0;
        for (unsigned i : block) {
            if (i >= n) throw std::invalid_argument("component index out of range");
            mask |= SubsetMask{1} << i;
        }
        if (std::popcount(mask) != static_cast<int>(block.size()) || (mask & seen))
            throw std::invalid_argument("partition blocks must be disjoint");
        seen |= mask;
        masks_.push_back(mask);
    }
    if (seen != ((SubsetMask{1} << n) - 1))
        throw std::invalid_argument("partition blocks must cover all components");
}

std::vector<unsigned> Partition::block_sizes() const {
    std::vector<unsigned> sizes;
    sizes.reserve(blocks_.size());
    for (const auto& block : blocks_) sizes.push_back(static_cast<unsigned>(block.size()));
    return sizes;
}

std::vector<unsigned> Partition::block_counts(SubsetMask subset) const {
    std::vector<unsigned> counts;
    counts.reserve(masks_.size());
    for (SubsetMask mask : masks_)
        counts.push_back(static_cast<unsigned>(std::popcount(subset & mask)));
    return counts;
}

StructureFunction make_series(unsigned n) {
    StructureFunction phi(n);
    phi.set(phi.full_mask(), true);
    return phi;
}

StructureFunction make_parallel(unsigned n) {
    StructureFunction phi(n);
    for (SubsetMask a = 1; a <= phi.full_mask(); ++a) phi.set(a, true);
    return phi;
}

StructureFunction make_k_out_of_n(unsigned k, unsigned n) {
    if (k < 1 || k > n) throw std::invalid_argument("k-out-of-n threshold out of range");
    StructureFunction phi(n);
    for (SubsetMask a = 0; a <= phi.full_mask(); ++a)
        if (static_cast<unsigned>(std::popcount(a)) >= k) phi.set(a, true);
    return phi;
}

StructureFunction conjunction_structure(SubsetMask b, unsigned n) {
    if (b == 0) throw std::invalid_argument("conjunction structure needs a nonempty component set");
    StructureFunction phi(n);
    if (b > phi.full_mask()) throw std::invalid_argument("component set out of range");
    for (SubsetMask a = 0; a <= phi.full_mask(); ++a)
        if ((a & b) == b) phi.set(a, true);
    return phi;
}

bool is_semicoherent(const StructureFunction& phi) {
    if (phi(0) || !phi(phi.full_mask())) return false;
    for (SubsetMask a = 0; a <= phi.full_mask(); ++a)
        for (unsigned i = 0; i < phi.component_count(); ++i) {
            SubsetMask bit = SubsetMask{1} << i;
            if (!(a & bit) && phi(a) && !phi(a | bit)) return false;
        }
    return true;
}

StructureFunction dual(const StructureFunction& chi) {
    StructureFunction result(chi.component_count());
    SubsetMask full = chi.full_mask();
    for (SubsetMask a = 0; a <= full; ++a) result.set(a, !chi(full & ~a));
    return result;
}

StructureFunction compose(const ModularSystem& system) {
    const Partition& partition = system.partition;
    unsigned r = partition.block_count();
    if (system.modules.size() != r) throw std::invalid_argument("one module per partition block required");
    if (system.organizer.component_count() != r)
        throw std::invalid_argument("organizer arity must equal the block count");
    for (unsigned j = 0; j < r; ++j)
        if (system.modules[j].component_count() != partition.block_size(j))
            throw std::invalid_argument("module size must match its block size");

    StructureFunction phi(partition.component_count());
    for (SubsetMask a = 0; a <= phi.full_mask(); ++a) {
        SubsetMask states = 0;
        for (unsigned j = 0; j < r; ++j) {
            // Project A ∩ C_j down to the module's local index space.
            SubsetMask local = 0;
            const auto& block = partition.block(j);
            for (unsigned pos = 0; pos < block.size(); ++pos)
                if (a & (SubsetMask{1} << block[pos])) local |= SubsetMask{1} << pos;
            if (system.modules[j](local)) states |= SubsetMask{1} << j;
        }
        phi.set(a, system.organizer(states));
    }
    return phi;
}

namespace {

template <typename Value>
Value multilinear_impl(const StructureFunction& chi, const std::vector<Value>& z) {
    unsigned m = chi.component_count();
    if (z.size() != m) throw std::invalid_argument("evaluation point dimension mismatch");
    Value total{0};
    for (SubsetMask b = 0; b <= chi.full_mask(); ++b) {
        if (!chi(b)) continue;
        Value term{1};
        for (unsigned j = 0; j < m; ++j)
            term *= (b & (SubsetMask{1} << j)) ? z[j] : Value{1} - z[j];
        total += term;
    }
    return total;
}

}  // namespace

Rational multilinear_extension(const StructureFunction& chi, const std::vector<Rational>& z) {
    return multilinear_impl(chi, z);
}

double multilinear_extension(const StructureFunction& chi, const std::vector<double>& z) {
    return multilinear_impl(chi, z);
}

}  // namespace relsig
