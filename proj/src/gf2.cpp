#include "lpcorr/gf2.hpp"

#include <algorithm>
#include <bit>

#include "lpcorr/errors.hpp"

namespace lpcorr {

namespace {

using u64 = std::uint64_t;

constexpr u64 kEvenBits = 0x5555555555555555ULL;
constexpr u64 kOddBits = 0xAAAAAAAAAAAAAAAAULL;

// bit i of x -> bit 2i
u64 spread(std::uint32_t x) {
    u64 v = x;
    v = (v | (v << 16)) & 0x0000FFFF0000FFFFULL;
    v = (v | (v << 8)) & 0x00FF00FF00FF00FFULL;
    v = (v | (v << 4)) & 0x0F0F0F0F0F0F0F0FULL;
    v = (v | (v << 2)) & 0x3333333333333333ULL;
    v = (v | (v << 1)) & kEvenBits;
    return v;
}

// bit 2i of v -> bit i
std::uint32_t compress(u64 v) {
    v &= kEvenBits;
    v = (v | (v >> 1)) & 0x3333333333333333ULL;
    v = (v | (v >> 2)) & 0x0F0F0F0F0F0F0F0FULL;
    v = (v | (v >> 4)) & 0x00FF00FF00FF00FFULL;
    v = (v | (v >> 8)) & 0x0000FFFF0000FFFFULL;
    v = (v | (v >> 16)) & 0x00000000FFFFFFFFULL;
    return static_cast<std::uint32_t>(v);
}

void check_degree(std::int64_t degree) {
    if (degree > static_cast<std::int64_t>(kMaxF2Degree))
        throw ResourceLimit("polynomial degree " + std::to_string(degree) + " exceeds the cap " +
                            std::to_string(kMaxF2Degree));
}

} // namespace

F2Poly F2Poly::monomial(std::size_t k) {
    check_degree(static_cast<std::int64_t>(k));
    F2Poly p;
    p.w_.assign((k >> 6) + 1, 0);
    p.w_.back() = u64{1} << (k & 63);
    return p;
}

F2Poly F2Poly::from_words(std::vector<std::uint64_t> words) {
    F2Poly p;
    p.w_ = std::move(words);
    p.trim();
    return p;
}

std::int64_t F2Poly::degree() const {
    if (w_.empty()) return -1;
    return static_cast<std::int64_t>(w_.size() - 1) * 64 + (63 - std::countl_zero(w_.back()));
}

void F2Poly::flip(std::size_t k) {
    if ((k >> 6) >= w_.size()) w_.resize((k >> 6) + 1, 0);
    w_[k >> 6] ^= u64{1} << (k & 63);
    trim();
}

std::size_t F2Poly::valuation() const {
    if (w_.empty()) throw InvalidArgument("valuation of the zero polynomial");
    std::size_t i = 0;
    while (w_[i] == 0) ++i;
    return i * 64 + std::countr_zero(w_[i]);
}

F2Poly F2Poly::shifted_up(std::size_t k) const {
    if (is_zero()) return {};
    check_degree(degree() + static_cast<std::int64_t>(k));
    F2Poly out;
    out.add_shifted(*this, k);
    return out;
}

F2Poly F2Poly::shifted_down(std::size_t k) const {
    const std::size_t q = k >> 6;
    const unsigned r = k & 63;
    if (q >= w_.size()) return {};
    std::vector<u64> out(w_.size() - q, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = w_[i + q] >> r;
        if (r && i + q + 1 < w_.size()) out[i] |= w_[i + q + 1] << (64 - r);
    }
    return from_words(std::move(out));
}

std::string F2Poly::str() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::int64_t k = 0; k <= degree(); ++k) {
        if (!coeff(static_cast<std::size_t>(k))) continue;
        if (!s.empty()) s += "+";
        if (k == 0) s += "1";
        else if (k == 1) s += "t";
        else s += "t^" + std::to_string(k);
    }
    return s;
}

F2Poly& F2Poly::operator+=(const F2Poly& o) {
    if (o.w_.size() > w_.size()) w_.resize(o.w_.size(), 0);
    for (std::size_t i = 0; i < o.w_.size(); ++i) w_[i] ^= o.w_[i];
    trim();
    return *this;
}

F2Poly operator*(const F2Poly& a, const F2Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    check_degree(a.degree() + b.degree());
    F2Poly out;
    out.w_.assign(a.w_.size() + b.w_.size() + 1, 0);
    for (std::size_t i = 0; i < a.w_.size(); ++i) {
        for (u64 word = a.w_[i]; word; word &= word - 1) {
            const std::size_t shift = i * 64 + std::countr_zero(word);
            const std::size_t q = shift >> 6;
            const unsigned r = shift & 63;
            for (std::size_t j = 0; j < b.w_.size(); ++j) {
                out.w_[j + q] ^= b.w_[j] << r;
                if (r) out.w_[j + q + 1] ^= b.w_[j] >> (64 - r);
            }
        }
    }
    out.trim();
    return out;
}

void F2Poly::trim() {
    while (!w_.empty() && w_.back() == 0) w_.pop_back();
}

void F2Poly::add_shifted(const F2Poly& src, std::size_t shift) {
    const std::size_t q = shift >> 6;
    const unsigned r = shift & 63;
    const std::size_t need = src.w_.size() + q + 1;
    if (w_.size() < need) w_.resize(need, 0);
    for (std::size_t i = 0; i < src.w_.size(); ++i) {
        w_[i + q] ^= src.w_[i] << r;
        if (r) w_[i + q + 1] ^= src.w_[i] >> (64 - r);
    }
    trim();
}

F2DivMod divmod(const F2Poly& a, const F2Poly& b) {
    if (b.is_zero()) throw InvalidArgument("polynomial division by zero");
    F2DivMod out{{}, a};
    const std::int64_t db = b.degree();
    for (std::int64_t i = out.remainder.degree(); i >= db; i = out.remainder.degree()) {
        const auto shift = static_cast<std::size_t>(i - db);
        out.remainder.add_shifted(b, shift);
        out.quotient.flip(shift);
    }
    return out;
}

F2Poly operator%(const F2Poly& a, const F2Poly& b) { return divmod(a, b).remainder; }

F2Poly gcd(F2Poly a, F2Poly b) {
    while (!b.is_zero()) {
        F2Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

F2Poly derivative(const F2Poly& f) {
    // d/dt t^k = k t^(k-1): only odd k survive, moving down one place
    std::vector<u64> out(f.words().begin(), f.words().end());
    for (u64& w : out) w = (w & kOddBits) >> 1;
    return F2Poly::from_words(std::move(out));
}

F2Poly square(const F2Poly& f) {
    std::vector<u64> out;
    out.reserve(2 * f.words().size());
    for (u64 w : f.words()) {
        out.push_back(spread(static_cast<std::uint32_t>(w)));
        out.push_back(spread(static_cast<std::uint32_t>(w >> 32)));
    }
    return F2Poly::from_words(std::move(out));
}

F2Poly square_root(const F2Poly& f) {
    const auto words = f.words();
    std::vector<u64> out((words.size() + 1) / 2, 0);
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (words[i] & kOddBits) throw InvalidArgument("not a square: " + f.str());
        out[i / 2] |= static_cast<u64>(compress(words[i])) << (32 * (i & 1));
    }
    return F2Poly::from_words(std::move(out));
}

F2Poly mul_mod(const F2Poly& a, const F2Poly& b, const F2Poly& modulus) {
    return (a * b) % modulus;
}

F2Poly pow_t_mod(const mpz_class& e, const F2Poly& modulus) {
    if (modulus.is_zero()) throw InvalidArgument("polynomial division by zero");
    if (sgn(e) < 0) throw InvalidArgument("negative exponent");
    F2Poly result = F2Poly::one() % modulus;
    for (std::size_t bit = mpz_sizeinbase(e.get_mpz_t(), 2); bit-- > 0;) {
        result = square(result) % modulus;
        if (mpz_tstbit(e.get_mpz_t(), bit)) result = result.shifted_up(1) % modulus;
    }
    return result;
}

std::vector<SquarefreeFactor> squarefree_decomposition(const F2Poly& f) {
    if (f.is_zero()) throw InvalidArgument("squarefree decomposition of zero");
    std::vector<SquarefreeFactor> out;
    if (f.degree() == 0) return out;

    auto append_doubled = [&out](const F2Poly& root) {
        for (auto& [factor, mult] : squarefree_decomposition(root)) out.push_back({factor, 2 * mult});
    };

    const F2Poly df = derivative(f);
    if (df.is_zero()) {
        append_doubled(square_root(f));
        return out;
    }
    F2Poly c = gcd(f, df);
    F2Poly w = divmod(f, c).quotient;
    for (unsigned i = 1; !w.is_one(); ++i) {
        F2Poly y = gcd(w, c);
        F2Poly factor = divmod(w, y).quotient;
        if (!factor.is_one()) out.push_back({std::move(factor), i});
        c = divmod(c, y).quotient;
        w = std::move(y);
    }
    // what is left of c has only even multiplicities
    if (!c.is_one()) append_doubled(square_root(c));
    return out;
}

F2Poly squarefree_part(const F2Poly& f) {
    F2Poly s = F2Poly::one();
    for (const auto& sf : squarefree_decomposition(f)) s = s * sf.factor;
    return s;
}

std::vector<DegreeCount> distinct_degree(const F2Poly& squarefree) {
    if (squarefree.is_zero()) throw InvalidArgument("distinct-degree factorization of zero");
    std::vector<DegreeCount> out;
    F2Poly rest = squarefree;
    if (rest.degree() < 1) return out;
    const F2Poly t = F2Poly::monomial(1);
    F2Poly h = t % rest;
    for (unsigned i = 1; rest.degree() >= 2 * static_cast<std::int64_t>(i); ++i) {
        h = square(h) % rest; // t^(2^i) mod rest
        const F2Poly g = gcd(rest, h + t);
        if (!g.is_one()) {
            out.push_back({i, static_cast<unsigned>(g.degree() / i)});
            rest = divmod(rest, g).quotient;
            h = h % rest;
        }
    }
    if (rest.degree() > 0) out.push_back({static_cast<unsigned>(rest.degree()), 1});
    return out;
}

F2Poly encode(const ShiftSet& shifts) {
    F2Poly out;
    if (shifts.empty()) return out;
    check_degree(shifts.max());
    std::vector<u64> words(static_cast<std::size_t>(shifts.max() >> 6) + 1, 0);
    for (Int h : shifts) words[static_cast<std::size_t>(h) >> 6] |= u64{1} << (h & 63);
    return F2Poly::from_words(std::move(words));
}

ClosureFamily family_from_generators(std::span<const ShiftSet> sets) {
    ClosureFamily fam;
    for (const ShiftSet& set : sets) {
        if (set.empty()) {
            fam.t_valuations.push_back(0);
            continue;
        }
        const F2Poly e = encode(set);
        const std::size_t v = e.valuation();
        fam.t_valuations.push_back(static_cast<Int>(v));
        fam.generator = gcd(std::move(fam.generator), e.shifted_down(v));
    }
    if (fam.generator.is_zero()) throw InvalidArgument("closure family needs a non-empty generator set");
    return fam;
}

std::optional<ShiftSet> TwoElementMember::as_shift_set() const {
    if (!distance.fits_slong_p()) return std::nullopt;
    return ShiftSet{0, static_cast<Int>(distance.get_si())};
}

TwoElementMember two_element_member(const ClosureFamily& family) {
    const F2Poly& f = family.generator;
    if (f.is_zero()) throw InvalidArgument("closure generator is zero");
    if (!f.coeff(0)) throw InvalidArgument("closure generator must have constant term 1: " + f.str());

    TwoElementMember out;
    out.degenerate = f.degree() == 0;

    mpz_class r = 1;
    for (const auto& [factor, mult] : squarefree_decomposition(f)) {
        out.m = std::max(out.m, mult);
        for (const auto& [degree, count] : distinct_degree(factor)) {
            mpz_class d = degree;
            mpz_lcm(r.get_mpz_t(), r.get_mpz_t(), d.get_mpz_t());
        }
    }
    if (r > kMaxCycleExponent)
        throw ResourceLimit("cycle exponent r = " + r.get_str() + " exceeds the cap " +
                            std::to_string(kMaxCycleExponent));
    out.r = r.get_ui();
    while ((1ull << out.n) < out.m) ++out.n;

    mpz_ui_pow_ui(out.distance.get_mpz_t(), 2, out.r);
    out.distance -= 1;
    out.distance <<= out.n;

    if (!divides_t_power_plus_one(f, out.distance))
        throw Error("internal: certificate f | t^D + 1 failed for f = " + f.str());
    return out;
}

bool divides_t_power_plus_one(const F2Poly& f, const mpz_class& distance) {
    if (f.is_zero()) return false;
    if (f.degree() == 0) return true;
    return pow_t_mod(distance, f).is_one();
}

bool closure_membership(const ClosureFamily& family, const ShiftSet& shifts) {
    if (shifts.empty()) return true;
    const F2Poly e = encode(shifts);
    return (e.shifted_down(e.valuation()) % family.generator).is_zero();
}

bool closure_membership(const ClosureFamily& family, const TwoElementMember& member) {
    return divides_t_power_plus_one(family.generator, member.distance);
}

} // namespace lpcorr
