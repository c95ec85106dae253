#include "relsig/signatures.hpp"

namespace relsig {

void SignatureVector::validate() const {
    Rational total{0};
    for (const Rational& p : entries) {
        if (p < 0) throw std::invalid_argument("signature entries must be nonnegative");
        total += p;
    }
    if (total != 1) throw std::invalid_argument("signature entries must sum to 1");
}

void TailSignatureVector::validate() const {
    if (entries.empty() || entries.front() != 1 || entries.back() != 0)
        throw std::invalid_argument("tail signature must start at 1 and end at 0");
    for (std::size_t k = 1; k < entries.size(); ++k)
        if (entries[k] > entries[k - 1])
            throw std::invalid_argument("tail signature must be nonincreasing");
}

SignatureVector structural_signature(const StructureFunction& phi) {
    if (!is_semicoherent(phi))
        throw std::domain_error("structural signature requires a semicoherent structure");
    // Tail entries are path counts over binomial coefficients; no quality
    // table is materialized, so large n stays cheap.
    unsigned n = phi.component_count();
    TailSignatureVector tail;
    tail.entries.assign(n + 1, Rational{0});
    for (unsigned k = 0; k <= n; ++k) {
        BigInt working = 0;
        for_each_subset_of_size(n, n - k, [&](SubsetMask a) {
            if (phi(a)) ++working;
        });
        tail.entries[k] = Rational(working, binomial(n, n - k));
    }
    return tail_to_signature(tail);
}

SignatureVector probability_signature(const StructureFunction& phi,
                                      const RelativeQualityFunction& q) {
    return tail_to_signature(tail_probability_signature(phi, q));
}

TailSignatureVector tail_probability_signature(const StructureFunction& phi,
                                               const RelativeQualityFunction& q) {
    unsigned n = phi.component_count();
    if (q.component_count() != n)
        throw std::invalid_argument("structure and quality function sizes differ");
    TailSignatureVector tail;
    tail.entries.assign(n + 1, Rational{0});
    for (unsigned k = 0; k <= n; ++k) {
        Rational sum{0};
        for_each_subset_of_size(n, n - k, [&](SubsetMask a) {
            if (phi(a)) sum += q(a);
        });
        tail.entries[k] = std::move(sum);
    }
    return tail;
}

SignatureVector tail_to_signature(const TailSignatureVector& tail) {
    SignatureVector signature;
    for (std::size_t k = 1; k < tail.entries.size(); ++k)
        signature.entries.push_back(tail.entries[k - 1] - tail.entries[k]);
    return signature;
}

TailSignatureVector signature_to_tail(const SignatureVector& signature) {
    TailSignatureVector tail;
    tail.entries.assign(signature.entries.size() + 1, Rational{0});
    for (std::size_t k = signature.entries.size(); k > 0; --k)
        tail.entries[k - 1] = tail.entries[k] + signature.entries[k - 1];
    return tail;
}

std::vector<Rational> cumulative(const TailSignatureVector& tail) {
    std::vector<Rational> result;
    result.reserve(tail.entries.size());
    for (const Rational& value : tail.entries) result.push_back(Rational{1} - value);
    return result;
}

}  // namespace relsig
