#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace lpcorr {

using Int = std::int64_t;

/// Largest value any pointwise evaluation may touch (n + max(H)).
inline constexpr Int kMaxInt = std::numeric_limits<Int>::max();

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(Int n);

/// Finite set of primes P, stored strictly increasing. Every element is
/// checked for primality on construction. The empty set encodes λ_∅ ≡ 1.
class PrimeSet {
public:
    PrimeSet() = default;
    /// Accepts any order; throws InvalidArgument on a non-prime or duplicate.
    explicit PrimeSet(std::vector<Int> primes);
    PrimeSet(std::initializer_list<Int> primes) : PrimeSet(std::vector<Int>(primes)) {}

    std::span<const Int> values() const { return primes_; }
    std::size_t size() const { return primes_.size(); }
    bool empty() const { return primes_.empty(); }
    bool contains(Int p) const;
    auto begin() const { return primes_.begin(); }
    auto end() const { return primes_.end(); }

    friend bool operator==(const PrimeSet&, const PrimeSet&) = default;

private:
    std::vector<Int> primes_;
};

/// Finite set of non-negative shifts H, stored strictly increasing.
/// Duplicates are rejected rather than merged.
class ShiftSet {
public:
    ShiftSet() = default;
    explicit ShiftSet(std::vector<Int> shifts);
    ShiftSet(std::initializer_list<Int> shifts) : ShiftSet(std::vector<Int>(shifts)) {}

    std::span<const Int> values() const { return shifts_; }
    std::size_t size() const { return shifts_.size(); }
    bool empty() const { return shifts_.empty(); }
    bool contains(Int h) const;
    /// max(H), or 0 for the empty set.
    Int max() const { return shifts_.empty() ? 0 : shifts_.back(); }
    Int min() const { return shifts_.empty() ? 0 : shifts_.front(); }
    auto begin() const { return shifts_.begin(); }
    auto end() const { return shifts_.end(); }

    friend bool operator==(const ShiftSet&, const ShiftSet&) = default;

private:
    std::vector<Int> shifts_;
};

/// Positive pairwise differences Ĥ = {|h_i - h_j| : i != j} of a shift set.
class DiffSet {
public:
    explicit DiffSet(const ShiftSet& shifts);

    std::span<const Int> values() const { return diffs_; }
    std::size_t size() const { return diffs_.size(); }
    bool empty() const { return diffs_.empty(); }
    auto begin() const { return diffs_.begin(); }
    auto end() const { return diffs_.end(); }

private:
    std::vector<Int> diffs_;
};

PrimeSet symmetric_difference(const PrimeSet& a, const PrimeSet& b);
ShiftSet symmetric_difference(const ShiftSet& a, const ShiftSet& b);

/// Ω_P(n): sum over p in P of the p-adic valuation of n. Only divides by
/// members of P. Throws InvalidArgument for n < 1.
int omega_p(const PrimeSet& primes, Int n);

/// λ_P(n) = (-1)^Ω_P(n), returned as +1 or -1.
int lambda_p(const PrimeSet& primes, Int n);

/// Λ_P^H(n) = ∏_{h in H} λ_P(n + h); +1 for empty H. Requires
/// n + max(H) <= kMaxInt.
int big_lambda(const PrimeSet& primes, const ShiftSet& shifts, Int n);

/// Primes dividing at least one element of Ĥ.
PrimeSet exceptional_primes(const ShiftSet& shifts);

/// True when p divides no element of Ĥ.
bool is_non_exceptional(Int p, const ShiftSet& shifts);

/// Primes in increasing order, starting with the first prime > `after`.
/// Segmented Eratosthenes; memory is O(sqrt(current) + block).
class PrimeStream {
public:
    explicit PrimeStream(Int after = 1);
    Int next();

private:
    void refill();
    void extend_base(Int limit);

    Int block_lo_;
    std::vector<Int> block_;
    std::size_t cursor_ = 0;
    std::vector<Int> base_;
    Int base_limit_ = 1;
};

std::string to_string(const PrimeSet& primes);
std::string to_string(const ShiftSet& shifts);

} // namespace lpcorr
