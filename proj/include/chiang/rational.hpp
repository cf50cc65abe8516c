#ifndef CHIANG_RATIONAL_HPP
#define CHIANG_RATIONAL_HPP

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "chiang/errors.hpp"

namespace chiang {

// Arbitrary-precision rational, always held in canonical form: lowest terms,
// positive denominator, and 0 represented as 0/1.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}  // NOLINT: implicit by design
    Rational(long num, long den);
    explicit Rational(const mpz_class& n) : v_(n) {}
    Rational(const mpz_class& num, const mpz_class& den);
    explicit Rational(const mpq_class& q);

    // Parses "p", "-p", or "p/q".  With strict=true the string must be the
    // canonical form (lowest terms, no "/1", no "-0", no leading '+').
    static Rational parse(std::string_view s, bool strict = false);

    const mpz_class& num() const { return v_.get_num(); }
    const mpz_class& den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t());
        return c <=> 0;
    }

    Rational abs() const;
    Rational pow(long e) const;  // e < 0 requires a nonzero base

    // Canonical string: "-35/64", "3", "0".
    std::string str() const;

    // Decimal rendering for human output.  Exact and terminating when the
    // denominator is of the form 2^a 5^b with at most `max_frac` fractional
    // digits; otherwise rounded to `sig` significant digits.
    std::string decimal(unsigned sig = 12, unsigned max_frac = 40) const;

private:
    mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.abs(); }

// Prime factorization of a positive integer.  Trial division by primes up to
// 10^6, then a probabilistic primality test on whatever is left; a composite
// remainder that survives both is reported separately rather than silently
// mis-labelled as prime.
struct Factorization {
    std::map<mpz_class, unsigned> primes;         // prime -> exponent
    std::optional<mpz_class> composite_cofactor;  // unfactored composite part

    bool complete() const { return !composite_cofactor.has_value(); }
    mpz_class reconstruct() const;  // product of all reported parts
};

Factorization factor_positive(const mpz_class& n);
Factorization denominator_factorization(const Rational& r);

bool is_power_of_two(const mpz_class& n);   // includes 1 = 2^0
bool is_power_of_four(const mpz_class& n);  // includes 1 = 4^0
bool has_power_of_two_denominator(const Rational& r);
bool has_power_of_four_denominator(const Rational& r);

// C(n, k) as an exact rational (0 when k < 0 or k > n).
Rational binomial(long n, long k);

}  // namespace chiang

#endif  // CHIANG_RATIONAL_HPP
