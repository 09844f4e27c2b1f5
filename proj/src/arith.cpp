#include "lpcorr/arith.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>

#include "lpcorr/errors.hpp"

namespace lpcorr {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 result = 1;
    base %= m;
    while (exp) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

// Bases 2..37 are a deterministic witness set below 3.3 * 10^24.
constexpr std::array<u64, 12> kWitnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

std::vector<Int> sorted_unique_or_throw(std::vector<Int> values, const char* what) {
    std::sort(values.begin(), values.end());
    const auto dup = std::adjacent_find(values.begin(), values.end());
    if (dup != values.end())
        throw InvalidArgument(std::string("duplicate ") + what + " " + std::to_string(*dup));
    return values;
}

std::vector<Int> sym_diff(std::span<const Int> a, std::span<const Int> b) {
    std::vector<Int> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace

bool is_prime(Int n) {
    if (n < 2) return false;
    const u64 m = static_cast<u64>(n);
    for (u64 p : kWitnesses) {
        if (m == p) return true;
        if (m % p == 0) return false;
    }
    u64 d = m - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : kWitnesses) {
        u64 x = pow_mod(a, d, m);
        if (x == 1 || x == m - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, m);
            if (x == m - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeSet::PrimeSet(std::vector<Int> primes)
    : primes_(sorted_unique_or_throw(std::move(primes), "prime")) {
    for (Int p : primes_)
        if (!is_prime(p)) throw InvalidArgument("not a prime: " + std::to_string(p));
}

bool PrimeSet::contains(Int p) const { return std::binary_search(primes_.begin(), primes_.end(), p); }

ShiftSet::ShiftSet(std::vector<Int> shifts)
    : shifts_(sorted_unique_or_throw(std::move(shifts), "shift")) {
    if (!shifts_.empty() && shifts_.front() < 0)
        throw InvalidArgument("negative shift: " + std::to_string(shifts_.front()));
}

bool ShiftSet::contains(Int h) const { return std::binary_search(shifts_.begin(), shifts_.end(), h); }

DiffSet::DiffSet(const ShiftSet& shifts) {
    const auto h = shifts.values();
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = i + 1; j < h.size(); ++j) diffs_.push_back(h[j] - h[i]);
    std::sort(diffs_.begin(), diffs_.end());
    diffs_.erase(std::unique(diffs_.begin(), diffs_.end()), diffs_.end());
}

PrimeSet symmetric_difference(const PrimeSet& a, const PrimeSet& b) {
    return PrimeSet(sym_diff(a.values(), b.values()));
}

ShiftSet symmetric_difference(const ShiftSet& a, const ShiftSet& b) {
    return ShiftSet(sym_diff(a.values(), b.values()));
}

int omega_p(const PrimeSet& primes, Int n) {
    if (n < 1) throw InvalidArgument("omega_P needs n >= 1, got " + std::to_string(n));
    int count = 0;
    for (Int p : primes) {
        if (p > n) break;
        while (n % p == 0) {
            n /= p;
            ++count;
        }
    }
    return count;
}

int lambda_p(const PrimeSet& primes, Int n) { return (omega_p(primes, n) & 1) ? -1 : 1; }

int big_lambda(const PrimeSet& primes, const ShiftSet& shifts, Int n) {
    if (n < 1) throw InvalidArgument("Lambda needs n >= 1, got " + std::to_string(n));
    if (n > kMaxInt - shifts.max())
        throw InvalidArgument("n + max(H) exceeds the 63-bit integer width");
    int parity = 0;
    for (Int h : shifts) parity ^= omega_p(primes, n + h) & 1;
    return parity ? -1 : 1;
}

PrimeSet exceptional_primes(const ShiftSet& shifts) {
    std::vector<Int> found;
    for (Int d : DiffSet(shifts)) {
        for (Int p = 2; p <= d / p; p += (p == 2 ? 1 : 2)) {
            if (d % p) continue;
            found.push_back(p);
            while (d % p == 0) d /= p;
        }
        if (d > 1) found.push_back(d);
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return PrimeSet(std::move(found));
}

bool is_non_exceptional(Int p, const ShiftSet& shifts) {
    const auto h = shifts.values();
    // p | (h_j - h_i) for some pair iff two shifts share a residue mod p
    if (static_cast<Int>(h.size()) > p) return false;
    std::vector<Int> residues;
    residues.reserve(h.size());
    for (Int x : h) residues.push_back(x % p);
    std::sort(residues.begin(), residues.end());
    return std::adjacent_find(residues.begin(), residues.end()) == residues.end();
}

PrimeStream::PrimeStream(Int after) : block_lo_(std::max<Int>(after + 1, 2)) {}

Int PrimeStream::next() {
    while (cursor_ >= block_.size()) refill();
    return block_[cursor_++];
}

void PrimeStream::extend_base(Int limit) {
    if (limit <= base_limit_) return;
    limit = std::max(limit, 2 * base_limit_);
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    base_.clear();
    for (Int i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        base_.push_back(i);
        for (Int j = i * i; j <= limit; j += i) composite[j] = true;
    }
    base_limit_ = limit;
}

void PrimeStream::refill() {
    constexpr Int kBlock = 1 << 16;
    const Int lo = block_lo_;
    if (lo > kMaxInt - kBlock) throw ResourceLimit("prime stream exhausted the integer width");
    const Int hi = lo + kBlock;
    auto root = static_cast<Int>(std::sqrt(static_cast<double>(hi)));
    while (root * root > hi) --root;
    while ((root + 1) <= hi / (root + 1)) ++root;
    extend_base(root);

    std::vector<bool> composite(kBlock, false);
    for (Int p : base_) {
        if (p > hi / p) break;
        Int start = std::max(p * p, (lo + p - 1) / p * p);
        for (Int m = start; m < hi; m += p) composite[m - lo] = true;
    }
    block_.clear();
    cursor_ = 0;
    for (Int i = 0; i < kBlock; ++i)
        if (!composite[i] && lo + i >= 2) block_.push_back(lo + i);
    block_lo_ = hi;
}

namespace {
std::string join(std::span<const Int> v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + "}";
}
} // namespace

std::string to_string(const PrimeSet& primes) { return join(primes.values()); }
std::string to_string(const ShiftSet& shifts) { return join(shifts.values()); }

} // namespace lpcorr
