#include "lpcorr/spectrum.hpp"

#include <algorithm>
#include <optional>

#include "lpcorr/density.hpp"
#include "lpcorr/errors.hpp"

namespace lpcorr {

namespace {

Rational local_factor(Int p, const ShiftSet& shifts) {
    return Rational(1) - Rational(2) * eta_local(p, shifts);
}

Int default_floor(const ShiftSet& shifts) {
    const DiffSet diffs(shifts);
    return diffs.empty() ? 0 : diffs.values().back();
}

// Greedy product of closed-form factors 1 - 2d/(p+1) for target in (0, 1].
std::vector<Int> greedy(const ShiftSet& shifts, const Rational& target, const Rational& epsilon,
                        Int floor, std::optional<Int> avoid, std::size_t budget) {
    std::vector<Int> chosen;
    Rational current = 1;
    const Int d = static_cast<Int>(shifts.size());
    PrimeStream primes(std::max<Int>(floor, 1));
    std::size_t examined = 0;
    while (current - target > epsilon) {
        if (examined == budget)
            throw ResourceLimit("prime budget of " + std::to_string(budget) +
                                " primes exhausted; reached κ = " + current.decimal() +
                                " for target " + target.decimal());
        const Int p = primes.next();
        ++examined;
        if (avoid && p == *avoid) continue;
        if (!is_non_exceptional(p, shifts)) continue;
        const Rational next = current * (Rational(1) - Rational(2 * d, p + 1));
        if (next >= target) {
            current = next;
            chosen.push_back(p);
        }
    }
    return chosen;
}

} // namespace

Correlation kappa_finite(const PrimeSet& primes, const ShiftSet& shifts) {
    Correlation out;
    for (Int p : primes) {
        Rational f = local_factor(p, shifts);
        out.value *= f;
        out.factors.push_back({p, std::move(f)});
    }
    return out;
}

CorrelationInterval kappa_truncated(const PrimeSet& truncation, const Rational& tail_sum,
                                    const ShiftSet& shifts) {
    if (tail_sum.sign() < 0) throw InvalidArgument("tail sum must be non-negative, got " + tail_sum.str());
    return {kappa_finite(truncation, shifts).value,
            Rational(2 * static_cast<Int>(shifts.size())) * tail_sum};
}

SpectrumDescription alpha_h(const ShiftSet& shifts) {
    if (shifts.empty()) throw InvalidArgument("alpha_H needs a non-empty shift set");

    const PrimeSet exceptional = exceptional_primes(shifts);
    std::vector<Int> candidates(exceptional.begin(), exceptional.end());
    PrimeStream stream;
    for (Int p = stream.next();; p = stream.next()) {
        if (is_non_exceptional(p, shifts)) {
            candidates.push_back(p);
            break;
        }
    }
    std::sort(candidates.begin(), candidates.end());

    SpectrumDescription out;
    bool first = true;
    for (Int p : candidates) {
        Rational f = local_factor(p, shifts);
        if (first || f < out.alpha) {
            out.alpha = std::move(f);
            out.witness_prime = p;
            first = false;
        }
    }
    out.lower = std::min(out.alpha, Rational(0));
    out.upper = 1;
    return out;
}

SpectrumDescription spectrum_describe(const ShiftSet& shifts) { return alpha_h(shifts); }

PrimeSet construct_target(const ShiftSet& shifts, const Rational& target, const Rational& epsilon,
                          const ConstructOptions& options) {
    if (epsilon.sign() <= 0) throw InvalidArgument("epsilon must be positive, got " + epsilon.str());
    if (target > Rational(1)) throw InvalidArgument("target " + target.str() + " exceeds 1");
    const Int floor = options.floor < 0 ? default_floor(shifts) : options.floor;

    if (target.sign() > 0) {
        if (shifts.empty() && target != Rational(1))
            throw InvalidArgument("with H empty every κ equals 1");
        return PrimeSet(greedy(shifts, target, epsilon, floor, std::nullopt, options.prime_budget));
    }

    if (shifts.empty()) throw InvalidArgument("with H empty every κ equals 1");
    const SpectrumDescription spectrum = alpha_h(shifts);
    if (!(target > spectrum.lower))
        throw InvalidArgument("target " + target.str() + " outside (" + spectrum.lower.str() + ", 1]");

    // here α_H < 0 and target in (α_H, 0]; κ = α_H · κ' with κ' in [0, 1)
    const Rational& alpha = spectrum.alpha;
    Rational inner_eps = epsilon / abs(alpha);
    Rational inner_target = target / alpha;
    if (inner_target.is_zero()) {
        // aim strictly above zero so the greedy terminates; split the budget
        inner_eps /= Rational(2);
        inner_target = std::min(inner_eps, Rational(1, 2));
    }
    std::vector<Int> chosen =
        greedy(shifts, inner_target, inner_eps, floor, spectrum.witness_prime, options.prime_budget);
    chosen.push_back(spectrum.witness_prime);
    return PrimeSet(std::move(chosen));
}

} // namespace lpcorr
