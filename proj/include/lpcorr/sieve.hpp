#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lpcorr/arith.hpp"
#include "lpcorr/rational.hpp"

namespace lpcorr {

/// Packed bit vector, bit i stored at words()[i / 64] >> (i % 64).
class ParityBits {
public:
    ParityBits() = default;
    explicit ParityBits(std::size_t size) : size_(size), words_((size + 63) / 64 + 1, 0) {}

    std::size_t size() const { return size_; }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    /// Number of set bits among the first `prefix` bits.
    std::size_t count(std::size_t prefix) const;
    std::size_t count() const { return count(size_); }

    std::span<std::uint64_t> words() { return words_; }
    std::span<const std::uint64_t> words() const { return words_; }

private:
    std::size_t size_ = 0;
    // one trailing guard word so 64-bit windows may straddle the end
    std::vector<std::uint64_t> words_;
};

struct SieveConfig {
    Int segment_length = Int{1} << 22;
    Int x_max = 0;
    /// A sample is emitted at every multiple of the stride, and at x_max.
    Int sample_stride = 0;
    unsigned threads = 1;

    /// Throws InvalidArgument unless the config is usable with `shifts`.
    void validate(const ShiftSet& shifts) const;
};

/// One point of the running average: S_P(x) = sum / x, where sum is the
/// exact integer Σ_{n<=x} Λ_P^H(n).
struct SignSample {
    Int x = 0;
    Int sum = 0;

    Rational average() const { return Rational(sum, x); }
    /// #{n <= x : Λ(n) = -1}
    Int negatives() const { return (x - sum) / 2; }
};

class SignSeries {
public:
    SignSeries() = default;
    explicit SignSeries(std::vector<SignSample> samples);

    std::span<const SignSample> samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    const SignSample& back() const { return samples_.back(); }
    auto begin() const { return samples_.begin(); }
    auto end() const { return samples_.end(); }

    friend bool operator==(const SignSeries& a, const SignSeries& b) {
        if (a.samples_.size() != b.samples_.size()) return false;
        for (std::size_t i = 0; i < a.samples_.size(); ++i)
            if (a.samples_[i].x != b.samples_[i].x || a.samples_[i].sum != b.samples_[i].sum)
                return false;
        return true;
    }

private:
    std::vector<SignSample> samples_;
};

/// Bit m - a holds Ω_P(m) mod 2 for m in [a, b). Realized by flipping the
/// bit of every multiple of every prime power p^k < b, p in P.
ParityBits sieve_parities(const PrimeSet& primes, Int a, Int b);

/// Bit n - a holds the parity of Λ_P^H(n) (1 means -1) for n in [a, b).
/// Sieves [a, b + max(H)) once and XORs the shifted windows.
ParityBits lambda_parities(const PrimeSet& primes, const ShiftSet& shifts, Int a, Int b);

/// Exact partial sums of Λ_P^H over [1, x_max], sampled per cfg. Segments
/// are independent and may be sieved on cfg.threads threads; the merge is
/// ordered, so the output does not depend on the thread count.
SignSeries running_average(const PrimeSet& primes, const ShiftSet& shifts, const SieveConfig& cfg);

/// #{n <= x : Λ_P^H(n) = -1} / x.
Rational empirical_density(const PrimeSet& primes, const ShiftSet& shifts, Int x,
                           unsigned threads = 1);

} // namespace lpcorr
