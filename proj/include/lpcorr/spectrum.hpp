#pragma once

#include <cstddef>
#include <vector>

#include "lpcorr/arith.hpp"
#include "lpcorr/rational.hpp"

namespace lpcorr {

struct CorrelationFactor {
    Int prime = 0;
    Rational factor; // 1 - 2η_p^H
};

/// κ_P^H for a finite P: the exact product of its local factors.
struct Correlation {
    Rational value{1};
    std::vector<CorrelationFactor> factors;
};

/// [center - radius, center + radius]; radius = 2|H| * declared tail sum.
struct CorrelationInterval {
    Rational center;
    Rational radius;

    Rational lower() const { return center - radius; }
    Rational upper() const { return center + radius; }
    bool contains(const Rational& v) const { return lower() <= v && v <= upper(); }
};

/// α_H = min_p (1 - 2η_p^H), the prime attaining it, and Γ_H = [min(α_H, 0), 1].
struct SpectrumDescription {
    Rational alpha;
    Int witness_prime = 0;
    Rational lower;
    Rational upper{1};
};

Correlation kappa_finite(const PrimeSet& primes, const ShiftSet& shifts);

/// Encloses κ of a small set whose primes outside `truncation` satisfy
/// Σ 1/(p+1) <= tail_sum. Throws InvalidArgument for a negative tail sum.
CorrelationInterval kappa_truncated(const PrimeSet& truncation, const Rational& tail_sum,
                                    const ShiftSet& shifts);

/// Scans every exceptional prime and the smallest non-exceptional one;
/// for non-exceptional p the factor 1 - 2d/(p+1) increases with p, so no
/// larger prime can go lower. Ties go to the smaller prime.
SpectrumDescription alpha_h(const ShiftSet& shifts);

SpectrumDescription spectrum_describe(const ShiftSet& shifts);

struct ConstructOptions {
    /// Only primes > floor are used (besides the α_H witness for negative
    /// targets). Negative means "use max(Ĥ)".
    Int floor = -1;
    /// Hard cap on the number of primes examined.
    std::size_t prime_budget = 1'000'000;
};

/// A finite prime set P with |κ_P^H - target| <= epsilon.
///
/// target in (0, 1]: greedy over non-exceptional primes p > floor in
/// increasing order, keeping p whenever the running product stays >= target,
/// until the product is within epsilon.
/// target in (α_H, 0] (only when α_H < 0): solve for target/α_H without the
/// witness prime, then adjoin the witness.
///
/// Throws InvalidArgument for a target outside (min(α_H, 0), 1] or a
/// non-positive epsilon; ResourceLimit when the prime budget runs out.
PrimeSet construct_target(const ShiftSet& shifts, const Rational& target, const Rational& epsilon,
                          const ConstructOptions& options = {});

} // namespace lpcorr
