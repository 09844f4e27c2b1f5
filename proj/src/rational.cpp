#include "lpcorr/rational.hpp"

#include <cctype>
#include <ostream>

#include "lpcorr/errors.hpp"

namespace lpcorr {

namespace {

mpz_class pow10(unsigned long k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
    return r;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
    std::string_view digits = s;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+'))
        digits.remove_prefix(1);
    if (!all_digits(digits))
        throw InvalidArgument("not a rational number: '" + std::string(whole) + "'");
    mpz_class z;
    z.set_str(std::string(digits), 10);
    if (s.front() == '-') z = -z;
    return z;
}

} // namespace

Rational::Rational(std::int64_t n) : q_(static_cast<long>(n)) {}

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw InvalidArgument("rational with zero denominator");
    q_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw InvalidArgument("division by zero");
    q_ /= o.q_;
    return *this;
}

Rational Rational::parse(std::string_view text) {
    const std::string_view whole = text;
    if (text.empty()) throw InvalidArgument("not a rational number: ''");

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        mpz_class num = parse_integer(text.substr(0, slash), whole);
        std::string_view den_text = text.substr(slash + 1);
        if (!all_digits(den_text))
            throw InvalidArgument("not a rational number: '" + std::string(whole) + "'");
        mpz_class den(std::string(den_text), 10);
        if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(whole) + "'");
        return Rational(mpq_class(num, den));
    }

    // decimal literal: [sign] digits [. digits] [e [sign] digits]
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    long exponent = 0;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = text.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        if (!all_digits(exp_text) || exp_text.size() > 6)
            throw InvalidArgument("not a rational number: '" + std::string(whole) + "'");
        exponent = std::stol(std::string(exp_text));
        if (exp_negative) exponent = -exponent;
        text = text.substr(0, e);
    }
    std::string digits;
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = text.substr(0, dot);
        std::string_view frac_part = text.substr(dot + 1);
        if ((int_part.empty() && frac_part.empty()) ||
            (!int_part.empty() && !all_digits(int_part)) ||
            (!frac_part.empty() && !all_digits(frac_part)))
            throw InvalidArgument("not a rational number: '" + std::string(whole) + "'");
        digits = std::string(int_part) + std::string(frac_part);
        exponent -= static_cast<long>(frac_part.size());
    } else {
        if (!all_digits(text))
            throw InvalidArgument("not a rational number: '" + std::string(whole) + "'");
        digits = std::string(text);
    }
    mpz_class mant(digits, 10);
    if (negative) mant = -mant;
    if (exponent >= 0) return Rational(mpq_class(mant * pow10(exponent)));
    return Rational(mpq_class(mant, pow10(-exponent)));
}

std::string Rational::str() const {
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::compact() const {
    return is_integer() ? q_.get_num().get_str() : str();
}

std::string Rational::decimal(int significant) const {
    if (significant < 1) significant = 1;
    if (is_zero()) return "0";

    mpz_class a = abs(q_.get_num());
    const mpz_class b = q_.get_den();

    // e = floor(log10(a/b))
    long e = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(b.get_mpz_t(), 10));
    auto ge_pow = [&](long k) { // a/b >= 10^k
        return k >= 0 ? a >= b * pow10(k) : a * pow10(-k) >= b;
    };
    while (ge_pow(e + 1)) ++e;
    while (!ge_pow(e)) --e;

    // scaled = round(a/b * 10^(significant-1-e)), half away from zero
    const long shift = significant - 1 - e;
    mpz_class num = a, den = b;
    if (shift >= 0) num *= pow10(shift);
    else den *= pow10(-shift);
    mpz_class scaled = (2 * num + den) / (2 * den);
    if (scaled == pow10(significant)) {
        scaled /= 10;
        ++e;
    }
    const std::string s = scaled.get_str();

    std::string out = sign() < 0 ? "-" : "";
    auto trim = [](std::string frac) {
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        return frac;
    };
    if (e >= -6 && e < significant) {
        if (e >= 0) {
            out += s.substr(0, e + 1);
            const std::string frac = trim(s.substr(e + 1));
            if (!frac.empty()) out += "." + frac;
        } else {
            out += "0." + std::string(-e - 1, '0') + trim(s);
        }
    } else {
        out += s.substr(0, 1);
        const std::string frac = trim(s.substr(1));
        if (!frac.empty()) out += "." + frac;
        out += (e < 0 ? "e-" : "e+") + std::to_string(e < 0 ? -e : e);
    }
    return out;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

} // namespace lpcorr
