#pragma once

#include <optional>
#include <vector>

#include "relsig/quality.hpp"
#include "relsig/signatures.hpp"
#include "relsig/structure.hpp"

namespace relsig {

/// Tail signature of a system of r modules connected by psi, from the module
/// tail signatures and the decomposition coefficients:
///   tail[n-k] = sum over a in T_k of c(a) * psi_hat(tails[j][n_j - a_j]).
TailSignatureVector compose_tail(const StructureFunction& psi,
                                 const std::vector<TailSignatureVector>& module_tails,
                                 const DecompositionCoefficients& coeffs);

/// Dual form on cumulative signatures, using the multilinear extension of
/// the dual organizer. Equals 1 - compose_tail on complementary inputs.
std::vector<Rational> compose_cumulative(const StructureFunction& psi,
                                         const std::vector<std::vector<Rational>>& module_cumulatives,
                                         const DecompositionCoefficients& coeffs);

/// Hypergeometric convolution of serially connected modules under symmetric
/// quality functions. Closed form; must agree with compose_tail for a series
/// organizer with hypergeometric coefficients.
TailSignatureVector series_convolution(const std::vector<TailSignatureVector>& module_tails,
                                       const std::vector<unsigned>& sizes);

/// Shortcut for modules that die exactly at their k_j-th internal failure
/// (i.e. work while more than n_j - k_j components work), whose tails are
/// 0/1-valued: the organizer is evaluated directly on indicator vectors
/// 1{a_j > n_j - k_j}. A series module has threshold 1, a parallel one n_j.
TailSignatureVector boolean_tail_shortcut(const StructureFunction& psi,
                                          const std::vector<unsigned>& thresholds,
                                          const std::vector<unsigned>& sizes,
                                          const DecompositionCoefficients& coeffs);

/// Recovers q from tail signatures of conjunction systems: for each nonempty
/// B, builds the indicator-of-superset structure as series-connected
/// conjunction modules over the partition and reads q(B) off its tail.
RelativeQualityFunction recover_q_via_conjunctions(const RelativeQualityFunction& q,
                                                   const Partition& partition);

/// Outcome of checking the composition theorem against direct computation.
struct CompositionReport {
    bool decomposable = false;
    /// Witness subset where the product form fails, when not decomposable.
    std::optional<SubsetMask> counterexample;
    /// Exact equality of the composed and direct tails (meaningful only when
    /// decomposable).
    bool matches = false;
    TailSignatureVector direct;
    TailSignatureVector composed;
};

/// Derives q from the ordering law, checks decomposability for the system's
/// partition and, when it holds, compares the composed tail signature with
/// the directly computed one.
CompositionReport verify_composition_theorem(const ModularSystem& system,
                                             const OrderDistribution& dist);

/// Duplicate the whole structure: max of two copies of chi on 2n components
/// (components 0..n-1 and their spares n..2n-1).
StructureFunction redundancy_at_system_level(const StructureFunction& chi);

/// Duplicate each component: chi applied to max(x_i, y_i).
StructureFunction redundancy_at_component_level(const StructureFunction& chi);

/// Closed-form cumulative signature of redundancy_at_system_level under
/// i.i.d. lifetimes, from the cumulative signature of chi alone.
std::vector<Rational> system_redundancy_cumulative(const std::vector<Rational>& chi_cumulative);

/// Closed-form cumulative signature of redundancy_at_component_level under
/// i.i.d. lifetimes, from the dual of chi evaluated on indicator vectors.
std::vector<Rational> component_redundancy_cumulative(const StructureFunction& chi);

}  // namespace relsig
