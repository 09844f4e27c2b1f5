#include "lpcorr/sieve.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "lpcorr/errors.hpp"

namespace lpcorr {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

void check_window(Int a, Int b) {
    if (a < 1) throw InvalidArgument("sieve window must start at 1 or later, got " + std::to_string(a));
    if (b <= a) throw InvalidArgument("empty sieve window [" + std::to_string(a) + ", " + std::to_string(b) + ")");
}

// Flip the bit of every multiple of p^k inside [lo, hi) for all k >= 1.
void flip_prime_powers(std::span<u64> words, Int lo, Int hi, Int p) {
    const u64 len = static_cast<u64>(hi - lo);
    for (u128 pk = static_cast<u128>(p); pk < static_cast<u128>(hi); pk *= static_cast<u128>(p)) {
        const u64 step = static_cast<u64>(pk);
        const u64 first = (static_cast<u64>(lo) + step - 1) / step * step;
        for (u64 m = first - static_cast<u64>(lo); m < len; m += step)
            words[m >> 6] ^= u64{1} << (m & 63);
    }
}

// 64 bits of `src` starting at bit `offset`; relies on the guard word.
inline u64 window64(std::span<const u64> src, std::size_t offset) {
    const std::size_t q = offset >> 6;
    const unsigned r = offset & 63;
    if (r == 0) return src[q];
    return (src[q] >> r) | (src[q + 1] << (64 - r));
}

struct SegmentResult {
    Int negatives = 0;
    // (x, negatives in [segment start, x])
    std::vector<std::pair<Int, Int>> marks;
};

SegmentResult run_segment(const PrimeSet& primes, const ShiftSet& shifts, Int start, Int end,
                          Int stride, Int x_max) {
    SegmentResult out;
    const ParityBits bits = lambda_parities(primes, shifts, start, end);
    const auto words = bits.words();

    Int x = (start + stride - 1) / stride * stride;
    std::size_t done_words = 0;
    Int running = 0;
    auto prefix_through = [&](Int target) {
        // negatives among offsets [0, target - start]
        const std::size_t upto = static_cast<std::size_t>(target - start) + 1;
        while ((done_words + 1) * 64 <= upto) running += std::popcount(words[done_words++]);
        const unsigned rem = upto - done_words * 64;
        Int partial = running;
        if (rem) partial += std::popcount(words[done_words] & ((u64{1} << rem) - 1));
        return partial;
    };
    for (; x < end; x += stride) out.marks.emplace_back(x, prefix_through(x));
    if (x_max >= start && x_max < end && x_max % stride != 0)
        out.marks.emplace_back(x_max, prefix_through(x_max));
    out.negatives = static_cast<Int>(bits.count());
    return out;
}

} // namespace

std::size_t ParityBits::count(std::size_t prefix) const {
    prefix = std::min(prefix, size_);
    std::size_t total = 0;
    const std::size_t full = prefix >> 6;
    for (std::size_t i = 0; i < full; ++i) total += std::popcount(words_[i]);
    if (const unsigned rem = prefix & 63)
        total += std::popcount(words_[full] & ((std::uint64_t{1} << rem) - 1));
    return total;
}

void SieveConfig::validate(const ShiftSet& shifts) const {
    if (x_max < 1) throw InvalidArgument("x_max must be positive");
    if (sample_stride < 1) throw InvalidArgument("sample_stride must be positive");
    if (threads < 1) throw InvalidArgument("threads must be positive");
    if (segment_length < shifts.max() + 1)
        throw InvalidArgument("segment_length must be at least max(H) + 1 = " +
                              std::to_string(shifts.max() + 1));
    if (x_max > kMaxInt - shifts.max() - 1)
        throw InvalidArgument("x_max + max(H) exceeds the 63-bit integer width");
}

SignSeries::SignSeries(std::vector<SignSample> samples) : samples_(std::move(samples)) {
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& s = samples_[i];
        if (s.x < 1 || (i > 0 && samples_[i - 1].x >= s.x))
            throw InvalidArgument("sign series x values must be positive and strictly increasing");
        if (s.sum > s.x || s.sum < -s.x || ((s.x - s.sum) & 1))
            throw InvalidArgument("sign series sum " + std::to_string(s.sum) +
                                  " is not attainable at x = " + std::to_string(s.x));
    }
}

ParityBits sieve_parities(const PrimeSet& primes, Int a, Int b) {
    check_window(a, b);
    ParityBits bits(static_cast<std::size_t>(b - a));
    for (Int p : primes) flip_prime_powers(bits.words(), a, b, p);
    return bits;
}

ParityBits lambda_parities(const PrimeSet& primes, const ShiftSet& shifts, Int a, Int b) {
    check_window(a, b);
    if (b > kMaxInt - shifts.max())
        throw InvalidArgument("window end + max(H) exceeds the 63-bit integer width");
    ParityBits out(static_cast<std::size_t>(b - a));
    if (shifts.empty() || primes.empty()) return out;

    const ParityBits omega = sieve_parities(primes, a, b + shifts.max());
    const auto src = omega.words();
    auto dst = out.words();
    const std::size_t nwords = (out.size() + 63) / 64;
    for (Int h : shifts)
        for (std::size_t i = 0; i < nwords; ++i)
            dst[i] ^= window64(src, i * 64 + static_cast<std::size_t>(h));
    if (const unsigned rem = out.size() & 63) dst[nwords - 1] &= (u64{1} << rem) - 1;
    return out;
}

SignSeries running_average(const PrimeSet& primes, const ShiftSet& shifts, const SieveConfig& cfg) {
    cfg.validate(shifts);

    const Int seg = cfg.segment_length;
    const Int nsegments = (cfg.x_max + seg - 1) / seg;
    std::vector<SegmentResult> results(static_cast<std::size_t>(nsegments));

    auto work = [&](Int i) {
        const Int start = 1 + i * seg;
        const Int end = std::min(start + seg, cfg.x_max + 1);
        results[static_cast<std::size_t>(i)] =
            run_segment(primes, shifts, start, end, cfg.sample_stride, cfg.x_max);
    };

    const unsigned nthreads =
        static_cast<unsigned>(std::min<Int>(cfg.threads, std::max<Int>(nsegments, 1)));
    if (nthreads <= 1) {
        for (Int i = 0; i < nsegments; ++i) work(i);
    } else {
        std::atomic<Int> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < nthreads; ++t) {
            pool.emplace_back([&] {
                try {
                    for (Int i = next++; i < nsegments; i = next++) work(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        pool.clear();
        if (failure) std::rethrow_exception(failure);
    }

    std::vector<SignSample> samples;
    Int negatives_before = 0;
    for (const auto& r : results) {
        for (const auto& [x, neg] : r.marks) {
            const Int negatives = negatives_before + neg;
            samples.push_back({x, x - 2 * negatives});
        }
        negatives_before += r.negatives;
    }
    return SignSeries(std::move(samples));
}

Rational empirical_density(const PrimeSet& primes, const ShiftSet& shifts, Int x, unsigned threads) {
    SieveConfig cfg;
    cfg.x_max = x;
    cfg.sample_stride = x;
    cfg.threads = threads;
    cfg.segment_length = std::max(cfg.segment_length, shifts.max() + 1);
    const SignSeries series = running_average(primes, shifts, cfg);
    return Rational(series.back().negatives(), x);
}

} // namespace lpcorr
