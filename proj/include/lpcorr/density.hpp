#pragma once

#include <cstddef>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "lpcorr/arith.hpp"
#include "lpcorr/rational.hpp"

namespace lpcorr {

/// One node of the η_p^H recursion. Steps are stored children-first, so a
/// step only refers to indices smaller than its own.
struct DensityStep {
    enum class Kind {
        empty,     // H = ∅, value 0
        singleton, // H = {h}, value 1/(p+1)
        split,     // residues of H mod p not constant: sum over the classes
        rescale,   // residues constant = offset: H -> (H - offset)/p
    };
    Kind kind = Kind::empty;
    ShiftSet shifts;
    Rational value;
    std::vector<std::size_t> children;
    Int offset = 0; // rescale only
};

using DensityTrace = std::vector<DensityStep>;

/// η_p^H together with an optional derivation trace (root step last).
struct LocalDensity {
    Int prime = 0;
    ShiftSet shifts;
    Rational value;
    std::optional<DensityTrace> trace;
};

/// Recomputes the root value of a trace from its steps, checking every
/// step against its children. Throws InvalidArgument on an inconsistent
/// trace.
Rational replay(Int prime, const DensityTrace& trace);

/// Exact local densities η_p^H = δ{n : Λ_p^H(n) = -1} by residue splitting
/// and translate-and-scale. Results are memoized per (p, H - min(H)); the
/// memo is guarded by a mutex so one solver can serve many threads.
class LocalDensitySolver {
public:
    LocalDensitySolver() = default;
    LocalDensitySolver(const LocalDensitySolver&) = delete;
    LocalDensitySolver& operator=(const LocalDensitySolver&) = delete;

    Rational eta(Int p, const ShiftSet& shifts);
    LocalDensity solve(Int p, const ShiftSet& shifts, bool with_trace = false);

    void clear();
    std::size_t memo_size() const;

private:
    struct Key {
        Int prime;
        std::vector<Int> shifts;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };

    Rational recurse(Int p, std::span<const Int> shifts, int depth, int depth_cap,
                     DensityTrace* trace, std::size_t* step_index);

    mutable std::mutex mutex_;
    std::unordered_map<Key, Rational, KeyHash> memo_;
};

/// Process-wide solver used by the free functions below.
LocalDensitySolver& default_density_solver();

/// η_p^H by the full recursion. Throws InvalidArgument if p is not prime.
Rational eta_local(Int p, const ShiftSet& shifts);

/// Same as eta_local, with the derivation trace attached.
LocalDensity eta_local_traced(Int p, const ShiftSet& shifts);

/// d/(p+1) when p divides no element of Ĥ; empty otherwise.
std::optional<Rational> eta_local_fast(Int p, const ShiftSet& shifts);

/// η_P^H by folding η <- η(1 - η_p) + η_p(1 - η) over the primes in the
/// given order, starting from 0.
Rational eta_set(std::span<const Int> primes, const ShiftSet& shifts);
Rational eta_set(const PrimeSet& primes, const ShiftSet& shifts);

} // namespace lpcorr
