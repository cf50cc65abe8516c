#ifndef CHIANG_NOVIKOV_HPP
#define CHIANG_NOVIKOV_HPP

#include <map>
#include <string>

#include "chiang/rational.hpp"

namespace chiang {

// Finite sum  sum_m c_m q^(m/4)  with m a nonnegative integer and c_m a
// nonzero rational.  Exponents are tracked in quarter units.
class NovikovSeries {
public:
    NovikovSeries() = default;

    // c * q^(m/4)
    static NovikovSeries monomial(int quarter_exponent, const Rational& c);

    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    // Coefficient of q^(m/4); zero when absent.
    Rational coefficient(int quarter_exponent) const;

    const std::map<int, Rational>& terms() const { return terms_; }

    NovikovSeries& operator+=(const NovikovSeries& o);
    NovikovSeries& operator-=(const NovikovSeries& o);
    NovikovSeries& operator*=(const NovikovSeries& o);
    NovikovSeries& operator*=(const Rational& c);

    friend NovikovSeries operator+(NovikovSeries a, const NovikovSeries& b) { return a += b; }
    friend NovikovSeries operator-(NovikovSeries a, const NovikovSeries& b) { return a -= b; }
    friend NovikovSeries operator*(NovikovSeries a, const NovikovSeries& b) { return a *= b; }
    friend NovikovSeries operator*(NovikovSeries a, const Rational& c) { return a *= c; }
    friend NovikovSeries operator*(const Rational& c, NovikovSeries a) { return a *= c; }

    NovikovSeries operator-() const;

    friend bool operator==(const NovikovSeries& a, const NovikovSeries& b) {
        return a.terms_ == b.terms_;
    }

    // "5/4·q^(1/2)", "1 + 3·q^(1/4)", "0".  Exponents print in lowest terms.
    std::string str() const;

private:
    void add_term(int quarter_exponent, const Rational& c);

    std::map<int, Rational> terms_;  // quarter exponent -> nonzero coefficient
};

// Pretty exponent for q^(m/4): "1/4", "1/2", "3/4", "1", "5/4", ...
std::string quarter_exponent_string(int m);

}  // namespace chiang

#endif  // CHIANG_NOVIKOV_HPP
