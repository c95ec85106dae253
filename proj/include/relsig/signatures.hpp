#pragma once

#include <vector>

#include "relsig/quality.hpp"
#include "relsig/rational.hpp"
#include "relsig/structure.hpp"

namespace relsig {

/// p_k = Pr(the k-th component failure kills the system), k = 1..n.
/// Structural when computed under the symmetric quality function,
/// probability in general.
struct SignatureVector {
    std::vector<Rational> entries;

    unsigned size() const { return static_cast<unsigned>(entries.size()); }
    const Rational& operator[](unsigned k) const { return entries[k]; }

    /// Nonnegative entries summing to 1; throws std::invalid_argument.
    void validate() const;

    bool operator==(const SignatureVector& other) const = default;
};

/// Suffix sums of a signature: entry k is Pr(system survives the k-th
/// failure), for k = 0..n. Starts at 1, ends at 0, nonincreasing.
struct TailSignatureVector {
    std::vector<Rational> entries;

    unsigned size() const { return static_cast<unsigned>(entries.size()); }
    const Rational& operator[](unsigned k) const { return entries[k]; }

    void validate() const;

    bool operator==(const TailSignatureVector& other) const = default;
};

/// Signature under exchangeable lifetimes; depends only on the structure.
/// Throws std::domain_error when phi is not semicoherent.
SignatureVector structural_signature(const StructureFunction& phi);

/// Signature under the lifetime law encoded by q.
SignatureVector probability_signature(const StructureFunction& phi,
                                      const RelativeQualityFunction& q);

/// Tail form directly: entry k = sum of q(A) phi(A) over |A| = n - k.
TailSignatureVector tail_probability_signature(const StructureFunction& phi,
                                               const RelativeQualityFunction& q);

/// p_k = tail[k-1] - tail[k].
SignatureVector tail_to_signature(const TailSignatureVector& tail);

/// Suffix sums; entry 0 is 1 for a valid signature.
TailSignatureVector signature_to_tail(const SignatureVector& signature);

/// Elementwise complement 1 - tail; the cumulative signature.
std::vector<Rational> cumulative(const TailSignatureVector& tail);

}  // namespace relsig
