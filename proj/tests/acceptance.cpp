// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lpcorr/arith.hpp"
#include "lpcorr/density.hpp"
#include "lpcorr/errors.hpp"
#include "lpcorr/gf2.hpp"
#include "lpcorr/sieve.hpp"
#include "lpcorr/spectrum.hpp"
#include "oracles.hpp"

using namespace lpcorr;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail << "first failure: " << what << "; ";
        pass = pass && ok;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SignSeries sieve_series(const PrimeSet& p, const ShiftSet& h, Int x, Int stride, unsigned threads = 1) {
    SieveConfig cfg;
    cfg.x_max = x;
    cfg.sample_stride = stride;
    cfg.threads = threads;
    return running_average(p, h, cfg);
}

void c1(Outcome& o) {
    const Rational a = eta_local(2, ShiftSet{0, 4, 6});
    const Rational b = eta_local(3, ShiftSet{0, 4, 6});
    o.require(a == Rational(1, 6), "eta(2,{0,4,6}) = " + a.str());
    o.require(b == Rational(5, 12), "eta(3,{0,4,6}) = " + b.str());
    o.detail << "eta(2,{0,4,6})=" << a << " eta(3,{0,4,6})=" << b;
}

void c2(Outcome& o) {
    int checked = 0;
    for (Int p : oracle::primes_up_to(100))
        for (Int h = 0; h <= 50; ++h, ++checked) {
            const Rational v = eta_local(p, ShiftSet{h});
            o.require(v == Rational(1, p + 1), "p=" + std::to_string(p) + " h=" + std::to_string(h));
        }
    o.detail << checked << " (p,h) pairs";
}

// Calls f on every subset of {0..max} with at most k elements, including ∅.
void for_each_subset(Int max, std::size_t k, std::vector<Int>& cur, Int next,
                     const std::function<void(const std::vector<Int>&)>& f) {
    f(cur);
    if (cur.size() == k) return;
    for (Int v = next; v <= max; ++v) {
        cur.push_back(v);
        for_each_subset(max, k, cur, v + 1, f);
        cur.pop_back();
    }
}

void c3(Outcome& o) {
    long checked = 0;
    for (Int p : oracle::primes_up_to(97)) {
        LocalDensitySolver solver; // fresh per prime keeps the memo small
        std::vector<Int> cur;
        for_each_subset(30, 5, cur, 0, [&](const std::vector<Int>& set) {
            for (std::size_t i = 0; i < set.size(); ++i)
                for (std::size_t j = i + 1; j < set.size(); ++j)
                    if ((set[j] - set[i]) % p == 0) return;
            const ShiftSet h(set);
            const Rational v = solver.eta(p, h);
            ++checked;
            o.require(v == Rational(static_cast<Int>(set.size()), p + 1),
                      "p=" + std::to_string(p) + " H=" + to_string(h) + " eta=" + v.str());
        });
    }
    o.detail << checked << " non-exceptional (p,H) pairs";
}

void c4(Outcome& o) {
    const Rational k = kappa_finite(PrimeSet{3}, ShiftSet{1, 2}).value;
    const auto t0 = std::chrono::steady_clock::now();
    const Rational s = sieve_series(PrimeSet{3}, ShiftSet{1, 2}, 10'000'000, 10'000'000).back().average();
    const double t = seconds_since(t0);
    o.require(k == Rational(0), "kappa = " + k.str());
    o.require(abs(s) <= Rational(1, 100), "S(1e7) = " + s.decimal());
    o.require(t < 60, "sieve took " + std::to_string(t) + " s");
    o.detail << "kappa=" << k << " S(1e7)=" << s.decimal() << " sieve " << t << " s";
}

void c5(Outcome& o) {
    o.detail << "heuristic tolerance 0.01;";
    for (const PrimeSet& p : {PrimeSet{2}, PrimeSet{2, 3}, PrimeSet{3, 5, 7}}) {
        Rational product = 1;
        for (Int q : p) product *= Rational(1) - Rational(2, q + 1);
        const Rational k = kappa_finite(p, ShiftSet{0}).value;
        const SignSeries s = sieve_series(p, ShiftSet{0}, 10'000'000, 5'000'000);
        const Rational half = s.samples()[0].average();
        const Rational full = s.back().average();
        o.require(k == product, "kappa " + k.str() + " vs product " + product.str());
        o.require(abs(full - product) <= Rational(1, 100), to_string(p) + " S(1e7) = " + full.decimal());
        o.detail << " P=" << to_string(p) << " kappa=" << k << " S(1e7)-kappa=" << (full - k).decimal()
                 << " drift S(1e7)-S(5e6)=" << (full - half).decimal();
    }
}

void c6(Outcome& o) {
    std::mt19937_64 rng(6);
    const std::vector<Int> pool = oracle::primes_up_to(30);
    for (int trial = 0; trial < 50; ++trial) {
        const PrimeSet p(oracle::random_pick(rng, pool, pool.size()));
        const ShiftSet h(oracle::random_subset(rng, 20, 0, 4));
        const Rational eta = eta_set(p, h);
        o.require(kappa_finite(p, h).value == Rational(1) - Rational(2) * eta,
                  "P=" + to_string(p) + " H=" + to_string(h));
        std::vector<Int> order(p.begin(), p.end());
        for (int k = 0; k < 5; ++k) {
            std::shuffle(order.begin(), order.end(), rng);
            o.require(eta_set(order, h) == eta, "permutation of P=" + to_string(p));
        }
    }
    o.detail << "50 random (P,H), 5 orderings each";
}

void c7(Outcome& o) {
    std::mt19937_64 rng(7);
    const std::vector<Int> pool = oracle::primes_up_to(50);
    for (int trial = 0; trial < 100; ++trial) {
        const PrimeSet p1(oracle::random_pick(rng, pool, 6)), p2(oracle::random_pick(rng, pool, 6));
        const ShiftSet h1(oracle::random_subset(rng, 12, 0, 3)), h2(oracle::random_subset(rng, 12, 0, 3));
        const PrimeSet p = symmetric_difference(p1, p2);
        const ShiftSet h = symmetric_difference(h1, h2);
        const std::vector<Int> pv(p.begin(), p.end());
        for (Int n = 1; n <= 10'000; ++n) {
            const int l = lambda_p(p, n);
            if (l != lambda_p(p1, n) * lambda_p(p2, n) || l != oracle::lambda_restricted(pv, n)) {
                o.require(false, "lambda law at n=" + std::to_string(n));
                return;
            }
            const int big = big_lambda(p, h, n);
            const int prod = big_lambda(p1, h1, n) * big_lambda(p1, h2, n) * big_lambda(p2, h1, n) *
                             big_lambda(p2, h2, n);
            if (big != prod) {
                o.require(false, "shift law at n=" + std::to_string(n) + " P=" + to_string(p) + " H=" + to_string(h));
                return;
            }
        }
    }
    o.detail << "100 draws, n <= 10^4";
}

void c8(Outcome& o) {
    struct Config {
        PrimeSet p;
        ShiftSet h;
        Int a;
        Int b;
    };
    const std::vector<Config> configs{
        {PrimeSet{2}, ShiftSet{0}, 1, 1'000'000},
        {PrimeSet{3}, ShiftSet{1, 2}, 1, 1'000'000},
        {PrimeSet{2, 3}, ShiftSet{0, 4, 6}, 1, 1'000'000},
        {PrimeSet{2, 3, 5, 7}, ShiftSet{0, 1, 2}, 123'456'789, 124'456'789},
        {PrimeSet{5, 11, 13, 101}, ShiftSet{0, 30}, 999'999'000'000, 1'000'000'000'000},
        {PrimeSet{2, 7}, ShiftSet{3, 5}, kMaxInt - 1'000'000, kMaxInt - 5},
    };
    std::mt19937_64 rng(8);
    for (const Config& c : configs) {
        const ParityBits bits = lambda_parities(c.p, c.h, c.a, c.b);
        std::uniform_int_distribution<Int> pick(c.a, c.b - 1);
        for (int i = 0; i < 1000; ++i) {
            const Int n = pick(rng);
            o.require(bits.test(static_cast<std::size_t>(n - c.a)) == (big_lambda(c.p, c.h, n) == -1),
                      "n=" + std::to_string(n) + " P=" + to_string(c.p) + " H=" + to_string(c.h));
        }
    }
    o.detail << configs.size() << " configurations x 1000 points";
}

void c9(Outcome& o) {
    const std::vector<Int> primes = oracle::primes_up_to(1000);
    for (const auto& [h, alpha, witness] : {std::tuple{ShiftSet{0, 4, 6}, Rational(0), Int{5}},
                                            std::tuple{ShiftSet{0, 1}, Rational(-1, 3), Int{2}}}) {
        const SpectrumDescription s = alpha_h(h);
        Rational best = 2;
        Int best_p = 0;
        for (Int p : primes) {
            const Rational f = Rational(1) - Rational(2) * eta_local(p, h);
            if (f < best) best = f, best_p = p;
        }
        o.require(s.alpha == alpha && s.witness_prime == witness,
                  "alpha(" + to_string(h) + ") = " + s.alpha.str() + " at " + std::to_string(s.witness_prime));
        o.require(best == alpha && best_p == witness, "scan disagrees for " + to_string(h));
        o.detail << "alpha(" << to_string(h) << ")=" << s.alpha.compact() << " witness=" << s.witness_prime << " ";
    }
}

void c10(Outcome& o) {
    const Rational eps(1, 1000);
    std::mt19937_64 rng(10);
    Rational worst = 0;
    for (const ShiftSet& h : {ShiftSet{0}, ShiftSet{0, 1}, ShiftSet{0, 4, 6}}) {
        const Rational lo = std::min(alpha_h(h).alpha, Rational(0)) + eps;
        constexpr Int kDen = 1'000'000;
        const Rational scaled = lo * Rational(kDen);
        const mpz_class floor = scaled.numerator() / scaled.denominator(); // lo < 0 gives a ceiling
        const Int first = floor.get_si() + 1;
        std::uniform_int_distribution<Int> pick(first, kDen - 1);
        for (int i = 0; i < 20; ++i) {
            const Rational target(pick(rng), kDen);
            try {
                const PrimeSet p = construct_target(h, target, eps);
                const Rational err = abs(kappa_finite(p, h).value - target);
                worst = std::max(worst, err);
                o.require(err <= eps, "H=" + to_string(h) + " target=" + target.str());
            } catch (const Error& e) {
                o.require(false, "H=" + to_string(h) + " target=" + target.str() + ": " + e.what());
            }
        }
    }
    o.detail << "60 targets, worst error " << worst.decimal();
}

void c11(Outcome& o) {
    std::mt19937_64 rng(11);
    int families = 0;
    unsigned long max_r = 0;
    while (families < 50) {
        // a common factor of degree <= 64 with constant term 1, times random cofactors
        std::uniform_int_distribution<Int> deg(1, 64);
        std::vector<Int> bits = oracle::random_subset(rng, deg(rng), 0, 64);
        bits.push_back(0);
        std::sort(bits.begin(), bits.end());
        bits.erase(std::unique(bits.begin(), bits.end()), bits.end());
        const F2Poly common = encode(ShiftSet(bits));
        std::vector<ShiftSet> sets;
        for (int i = 0; i < 3; ++i) {
            const F2Poly p = common * encode(ShiftSet(oracle::random_subset(rng, 24, 1, 8))).shifted_up(rng() % 5);
            std::vector<Int> exps;
            for (std::int64_t k = 0; k <= p.degree(); ++k)
                if (p.coeff(static_cast<std::size_t>(k))) exps.push_back(k);
            sets.emplace_back(exps);
        }
        const ClosureFamily fam = family_from_generators(sets);
        if (fam.generator.degree() > 64 || fam.generator.degree() < 1) continue;
        ++families;

        const TwoElementMember m = two_element_member(fam);
        max_r = std::max(max_r, m.r);
        mpz_class expected;
        mpz_ui_pow_ui(expected.get_mpz_t(), 2, m.r);
        expected = (expected - 1) << m.n;
        const std::string tag = "f=" + fam.generator.str();
        o.require(m.distance == expected, tag + " D != (2^r-1) 2^n");
        o.require((1u << m.n) >= m.m && (m.n == 0 || (1u << (m.n - 1)) < m.m), tag + " n not minimal");
        o.require(divides_t_power_plus_one(fam.generator, m.distance), tag + " certificate");

        oracle::Poly128 f128 = 0;
        const auto w = fam.generator.words();
        for (std::size_t i = 0; i < w.size(); ++i) f128 |= oracle::Poly128{w[i]} << (64 * i);
        o.require(oracle::t_cycle_power_mod(f128, m.r, m.n) == 1, tag + " independent certificate");
        o.require(closure_membership(fam, m), tag + " membership");
        if (const auto set = m.as_shift_set(); set && m.distance <= 1'000'000)
            o.require(closure_membership(fam, *set), tag + " membership of " + to_string(*set));
    }
    o.detail << families << " families, largest r=" << max_r;
}

void c12(Outcome& o) {
    const PrimeSet p{2, 3, 5, 7};
    const ShiftSet h{0, 1, 2};
    constexpr Int x = 100'000'000;
    auto t0 = std::chrono::steady_clock::now();
    const SignSeries one = sieve_series(p, h, x, 10'000'000, 1);
    const double t1 = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const SignSeries four = sieve_series(p, h, x, 10'000'000, 4);
    const double t4 = seconds_since(t0);
    o.require(t1 < 60, "single-threaded run took " + std::to_string(t1) + " s");
    o.require(one == four, "thread count changed the sums");
    o.detail << "1 thread " << t1 << " s, 4 threads " << t4 << " s, S(1e8)=" << one.back().average().decimal();
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, void (*)(Outcome&)>> criteria{
        {"exact local densities for {0,4,6}", c1},
        {"singleton law", c2},
        {"non-exceptional closed form", c3},
        {"vanishing correlation", c4},
        {"d = 1 products against the sieve", c5},
        {"kappa = 1 - 2 eta and fold order", c6},
        {"group laws", c7},
        {"sieve against pointwise valuations", c8},
        {"alpha_H and witnesses", c9},
        {"target construction round trip", c10},
        {"two-element member certificates", c11},
        {"sieve performance and thread invariance", c12},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        failed += !o.pass;
        std::printf("%s %2zu %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    seconds_since(t0), o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
