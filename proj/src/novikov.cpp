#include "chiang/novikov.hpp"

#include <stdexcept>

namespace chiang {

NovikovSeries NovikovSeries::monomial(int quarter_exponent, const Rational& c) {
    if (quarter_exponent < 0)
        throw std::invalid_argument("negative Novikov exponent");
    NovikovSeries s;
    s.add_term(quarter_exponent, c);
    return s;
}

Rational NovikovSeries::coefficient(int quarter_exponent) const {
    auto it = terms_.find(quarter_exponent);
    return it == terms_.end() ? Rational(0) : it->second;
}

void NovikovSeries::add_term(int quarter_exponent, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(quarter_exponent, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

NovikovSeries& NovikovSeries::operator+=(const NovikovSeries& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

NovikovSeries& NovikovSeries::operator-=(const NovikovSeries& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

NovikovSeries& NovikovSeries::operator*=(const NovikovSeries& o) {
    NovikovSeries out;
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) out.add_term(m1 + m2, c1 * c2);
    terms_ = std::move(out.terms_);
    return *this;
}

NovikovSeries& NovikovSeries::operator*=(const Rational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, coeff] : terms_) coeff *= c;
    return *this;
}

NovikovSeries NovikovSeries::operator-() const {
    NovikovSeries out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

std::string quarter_exponent_string(int m) {
    return Rational(m, 4).str();
}

std::string NovikovSeries::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) out += c.sign() < 0 ? " - " : " + ";
        const Rational shown = first ? c : c.abs();
        first = false;
        if (m == 0) {
            out += shown.str();
        } else {
            if (!(shown == Rational(1))) {
                if (shown == Rational(-1)) out += "-";
                else out += shown.str() + "·";
            }
            out += "q^(" + quarter_exponent_string(m) + ")";
        }
    }
    return out;
}

}  // namespace chiang
