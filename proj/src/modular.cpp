#include "relsig/modular.hpp"

#include <bit>
#include <numeric>

namespace relsig {

namespace {

unsigned total_size(const std::vector<unsigned>& sizes) {
    return std::accumulate(sizes.begin(), sizes.end(), 0u);
}

void check_arity(const StructureFunction& psi, const std::vector<unsigned>& sizes,
                 std::size_t vector_count, std::size_t vector_lengths_ok) {
    if (psi.component_count() != sizes.size())
        throw std::invalid_argument("organizer arity must equal the module count");
    if (vector_count != sizes.size() || !vector_lengths_ok)
        throw std::invalid_argument("one signature of length n_j + 1 per module required");
}

}  // namespace

TailSignatureVector compose_tail(const StructureFunction& psi,
                                 const std::vector<TailSignatureVector>& module_tails,
                                 const DecompositionCoefficients& coeffs) {
    const auto& sizes = coeffs.block_sizes();
    bool lengths_ok = module_tails.size() == sizes.size();
    for (std::size_t j = 0; lengths_ok && j < sizes.size(); ++j)
        lengths_ok = module_tails[j].size() == sizes[j] + 1;
    check_arity(psi, sizes, module_tails.size(), lengths_ok);

    unsigned n = total_size(sizes);
    TailSignatureVector tail;
    tail.entries.assign(n + 1, Rational{0});
    std::vector<Rational> z(sizes.size());
    for (unsigned k = 0; k <= n; ++k) {
        Rational sum{0};
        for_each_level_cell(sizes, k, [&](const std::vector<unsigned>& a) {
            for (std::size_t j = 0; j < sizes.size(); ++j) z[j] = module_tails[j][sizes[j] - a[j]];
            sum += coeffs.at(a) * multilinear_extension(psi, z);
        });
        tail.entries[n - k] = std::move(sum);
    }
    return tail;
}

std::vector<Rational> compose_cumulative(const StructureFunction& psi,
                                         const std::vector<std::vector<Rational>>& module_cumulatives,
                                         const DecompositionCoefficients& coeffs) {
    const auto& sizes = coeffs.block_sizes();
    bool lengths_ok = module_cumulatives.size() == sizes.size();
    for (std::size_t j = 0; lengths_ok && j < sizes.size(); ++j)
        lengths_ok = module_cumulatives[j].size() == sizes[j] + 1;
    check_arity(psi, sizes, module_cumulatives.size(), lengths_ok);

    StructureFunction psi_dual = dual(psi);
    unsigned n = total_size(sizes);
    std::vector<Rational> result(n + 1, Rational{0});
    std::vector<Rational> z(sizes.size());
    for (unsigned k = 0; k <= n; ++k) {
        Rational sum{0};
        for_each_level_cell(sizes, k, [&](const std::vector<unsigned>& a) {
            for (std::size_t j = 0; j < sizes.size(); ++j)
                z[j] = module_cumulatives[j][sizes[j] - a[j]];
            sum += coeffs.at(a) * multilinear_extension(psi_dual, z);
        });
        result[n - k] = std::move(sum);
    }
    return result;
}

TailSignatureVector series_convolution(const std::vector<TailSignatureVector>& module_tails,
                                       const std::vector<unsigned>& sizes) {
    if (module_tails.size() != sizes.size())
        throw std::invalid_argument("one tail signature per module required");
    for (std::size_t j = 0; j < sizes.size(); ++j)
        if (module_tails[j].size() != sizes[j] + 1)
            throw std::invalid_argument("tail signature length must be n_j + 1");

    unsigned n = total_size(sizes);
    TailSignatureVector tail;
    tail.entries.assign(n + 1, Rational{0});
    for (unsigned k = 0; k <= n; ++k) {
        Rational sum{0};
        for_each_level_cell(sizes, k, [&](const std::vector<unsigned>& a) {
            Rational term{1};
            for (std::size_t j = 0; j < sizes.size(); ++j)
                term *= Rational(binomial(sizes[j], a[j])) * module_tails[j][sizes[j] - a[j]];
            sum += term;
        });
        tail.entries[n - k] = sum / Rational(binomial(n, k));
    }
    return tail;
}

TailSignatureVector boolean_tail_shortcut(const StructureFunction& psi,
                                          const std::vector<unsigned>& thresholds,
                                          const std::vector<unsigned>& sizes,
                                          const DecompositionCoefficients& coeffs) {
    if (thresholds.size() != sizes.size() || coeffs.block_sizes() != sizes)
        throw std::invalid_argument("thresholds, sizes, and coefficient grid must agree");
    if (psi.component_count() != sizes.size())
        throw std::invalid_argument("organizer arity must equal the module count");
    for (std::size_t j = 0; j < sizes.size(); ++j)
        if (thresholds[j] < 1 || thresholds[j] > sizes[j])
            throw std::invalid_argument("module threshold out of range");

    unsigned n = total_size(sizes);
    TailSignatureVector tail;
    tail.entries.assign(n + 1, Rational{0});
    for (unsigned k = 0; k <= n; ++k) {
        Rational sum{0};
        for_each_level_cell(sizes, k, [&](const std::vector<unsigned>& a) {
            SubsetMask alive = 0;
            for (std::size_t j = 0; j < sizes.size(); ++j)
                if (a[j] > sizes[j] - thresholds[j]) alive |= SubsetMask{1} << j;
            if (psi(alive)) sum += coeffs.at(a);
        });
        tail.entries[n - k] = std::move(sum);
    }
    return tail;
}

RelativeQualityFunction recover_q_via_conjunctions(const RelativeQualityFunction& q,
                                                   const Partition& partition) {
    unsigned n = q.component_count();
    if (partition.component_count() != n)
        throw std::invalid_argument("partition and quality function sizes differ");
    unsigned r = partition.block_count();

    std::vector<Rational> values(std::size_t{1} << n, Rational{0});
    values[0] = 1;
    SubsetMask full = (SubsetMask{1} << n) - 1;
    for (SubsetMask b = 1; b <= full; ++b) {
        SubsetMask touched = 0;
        std::vector<StructureFunction> modules;
        for (unsigned j = 0; j < r; ++j) {
            const auto& block = partition.block(j);
            SubsetMask local = 0;
            for (unsigned pos = 0; pos < block.size(); ++pos)
                if (b & (SubsetMask{1} << block[pos])) local |= SubsetMask{1} << pos;
            if (local) {
                touched |= SubsetMask{1} << j;
                modules.push_back(conjunction_structure(local, partition.block_size(j)));
            } else {
                // Untouched blocks are ignored by the organizer; any
                // semicoherent filler works.
                modules.push_back(make_series(partition.block_size(j)));
            }
        }
        ModularSystem system{partition, std::move(modules), conjunction_structure(touched, r)};
        auto tail = tail_probability_signature(compose(system), q);
        values[b] = tail[n - static_cast<unsigned>(std::popcount(b))];
    }
    return RelativeQualityFunction(n, std::move(values));
}

CompositionReport verify_composition_theorem(const ModularSystem& system,
                                             const OrderDistribution& dist) {
    const Partition& partition = system.partition;
    auto q = q_from_order_distribution(dist);
    std::vector<RelativeQualityFunction> marginals;
    for (unsigned j = 0; j < partition.block_count(); ++j)
        marginals.push_back(marginal_quality(dist, partition.block(j)));

    CompositionReport report;
    auto check = check_decomposable(q, marginals, partition);
    if (!check.decomposable()) {
        report.counterexample = check.counterexample;
        return report;
    }
    report.decomposable = true;

    std::vector<TailSignatureVector> module_tails;
    for (unsigned j = 0; j < partition.block_count(); ++j)
        module_tails.push_back(tail_probability_signature(system.modules[j], marginals[j]));
    report.composed = compose_tail(system.organizer, module_tails, *check.coefficients);
    report.direct = tail_probability_signature(compose(system), q);
    report.matches = report.composed == report.direct;
    return report;
}

StructureFunction redundancy_at_system_level(const StructureFunction& chi) {
    unsigned n = chi.component_count();
    StructureFunction phi(2 * n);
    SubsetMask low = chi.full_mask();
    for (SubsetMask a = 0; a <= phi.full_mask(); ++a)
        phi.set(a, chi(a & low) || chi((a >> n) & low));
    return phi;
}

StructureFunction redundancy_at_component_level(const StructureFunction& chi) {
    unsigned n = chi.component_count();
    StructureFunction phi(2 * n);
    SubsetMask low = chi.full_mask();
    for (SubsetMask a = 0; a <= phi.full_mask(); ++a)
        phi.set(a, chi((a & low) | ((a >> n) & low)));
    return phi;
}

std::vector<Rational> system_redundancy_cumulative(const std::vector<Rational>& chi_cumulative) {
    if (chi_cumulative.empty()) throw std::invalid_argument("empty cumulative signature");
    unsigned n = static_cast<unsigned>(chi_cumulative.size() - 1);
    std::vector<Rational> result(2 * n + 1, Rational{0});
    for (unsigned k = 0; k <= 2 * n; ++k) {
        Rational sum{0};
        unsigned lo = k > n ? 0 : n - k;
        unsigned hi = std::min(n, 2 * n - k);
        for (unsigned a = lo; a <= hi; ++a)
            sum += Rational(binomial(n, a) * binomial(n, 2 * n - k - a)) * chi_cumulative[a] *
                   chi_cumulative[2 * n - k - a];
        result[2 * n - k] = sum / Rational(binomial(2 * n, k));
    }
    return result;
}

std::vector<Rational> component_redundancy_cumulative(const StructureFunction& chi) {
    unsigned n = chi.component_count();
    StructureFunction chi_dual = dual(chi);
    std::vector<unsigned> sizes(n, 2);
    std::vector<Rational> result(2 * n + 1, Rational{0});
    for (unsigned k = 0; k <= 2 * n; ++k) {
        Rational sum{0};
        for_each_level_cell(sizes, k, [&](const std::vector<unsigned>& a) {
            SubsetMask dead_pairs = 0;
            Rational weight{1};
            for (unsigned i = 0; i < n; ++i) {
                weight *= Rational(binomial(2, a[i]));
                if (a[i] == 0) dead_pairs |= SubsetMask{1} << i;
            }
            if (chi_dual(dead_pairs)) sum += weight;
        });
        result[2 * n - k] = sum / Rational(binomial(2 * n, k));
    }
    return result;
}

}  // namespace relsig
