#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lpcorr/arith.hpp"

namespace lpcorr {

/// Largest polynomial degree accepted from user input.
inline constexpr std::size_t kMaxF2Degree = std::size_t{1} << 20;

/// Dense polynomial over the two-element field, coefficient of t^i in bit i.
/// The word vector never ends in a zero word; zero is the empty vector.
class F2Poly {
public:
    F2Poly() = default;

    static F2Poly one() { return monomial(0); }
    /// t^k; throws ResourceLimit beyond kMaxF2Degree.
    static F2Poly monomial(std::size_t k);
    static F2Poly from_words(std::vector<std::uint64_t> words);

    /// -1 for the zero polynomial.
    std::int64_t degree() const;
    bool is_zero() const { return w_.empty(); }
    bool is_one() const { return w_.size() == 1 && w_[0] == 1; }
    bool coeff(std::size_t k) const {
        return (k >> 6) < w_.size() && ((w_[k >> 6] >> (k & 63)) & 1u);
    }
    void flip(std::size_t k);

    /// Multiplicity of the root 0, i.e. the lowest set bit. Requires non-zero.
    std::size_t valuation() const;
    /// Multiplication / exact-floor division by t^k.
    F2Poly shifted_up(std::size_t k) const;
    F2Poly shifted_down(std::size_t k) const;

    std::span<const std::uint64_t> words() const { return w_; }
    /// "1+t+t^2"; "0" for zero.
    std::string str() const;

    /// this += t^shift * src, without the degree cap.
    void add_shifted(const F2Poly& src, std::size_t shift);

    F2Poly& operator+=(const F2Poly& o);
    friend F2Poly operator+(F2Poly a, const F2Poly& b) { return a += b; }
    friend F2Poly operator*(const F2Poly& a, const F2Poly& b);
    friend bool operator==(const F2Poly&, const F2Poly&) = default;

private:
    void trim();

    std::vector<std::uint64_t> w_;
};

struct F2DivMod {
    F2Poly quotient;
    F2Poly remainder;
};

/// Euclidean division; throws InvalidArgument for a zero divisor.
F2DivMod divmod(const F2Poly& a, const F2Poly& b);
F2Poly operator%(const F2Poly& a, const F2Poly& b);
F2Poly gcd(F2Poly a, F2Poly b);
F2Poly derivative(const F2Poly& f);
F2Poly square(const F2Poly& f);
/// g with g^2 = f; throws InvalidArgument if f has an odd-degree term.
F2Poly square_root(const F2Poly& f);
F2Poly mul_mod(const F2Poly& a, const F2Poly& b, const F2Poly& modulus);
/// t^e mod modulus by left-to-right binary powering.
F2Poly pow_t_mod(const mpz_class& e, const F2Poly& modulus);

struct SquarefreeFactor {
    F2Poly factor; // squarefree, pairwise coprime across the list
    unsigned multiplicity = 0;
};

/// f = ∏ factor^multiplicity. Empty for f = 1.
std::vector<SquarefreeFactor> squarefree_decomposition(const F2Poly& f);

/// Product of the distinct irreducible factors of f.
F2Poly squarefree_part(const F2Poly& f);

struct DegreeCount {
    unsigned degree = 0;
    unsigned count = 0; // irreducible factors of this degree
};

/// Irreducible factor degrees of a squarefree polynomial.
std::vector<DegreeCount> distinct_degree(const F2Poly& squarefree);

/// φ(H) = Σ_{h in H} t^h.
F2Poly encode(const ShiftSet& shifts);

/// Generator of the smallest family containing the given sets that is
/// closed under symmetric difference and translation: the gcd of the
/// encodings after stripping powers of t, so generator(0) = 1.
struct ClosureFamily {
    F2Poly generator;
    /// Power of t stripped from each input set (0 for an empty set).
    std::vector<Int> t_valuations;
};

ClosureFamily family_from_generators(std::span<const ShiftSet> sets);

/// {0, D} in the family, D = (2^r - 1) * 2^n. r is the lcm of the
/// irreducible factor degrees of the generator, m the largest
/// multiplicity, n the least integer with 2^n >= m.
struct TwoElementMember {
    mpz_class distance;
    unsigned long r = 1;
    unsigned m = 0;
    unsigned n = 0;
    /// Generator is the constant 1: the family is every finite set.
    bool degenerate = false;

    /// {0, D} when D fits the 63-bit integer width.
    std::optional<ShiftSet> as_shift_set() const;
};

/// Largest r accepted before 2^r - 1 becomes impractical.
inline constexpr unsigned long kMaxCycleExponent = 1ul << 26;

/// Throws InvalidArgument for a zero generator or one with f(0) = 0, and
/// ResourceLimit when r exceeds kMaxCycleExponent. The result is verified
/// with divides_t_power_plus_one before it is returned.
TwoElementMember two_element_member(const ClosureFamily& family);

/// The divisibility certificate f | t^D + 1.
bool divides_t_power_plus_one(const F2Poly& f, const mpz_class& distance);

/// True iff φ(H) = t^a g with the generator dividing g. Empty H is always in.
bool closure_membership(const ClosureFamily& family, const ShiftSet& shifts);
/// Membership of {0, D} without materializing t^D.
bool closure_membership(const ClosureFamily& family, const TwoElementMember& member);

} // namespace lpcorr
