#include "chiang/rational.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <vector>

namespace chiang {

namespace {

void require_nonzero_den(const mpz_class& den) {
    if (sgn(den) == 0) throw DivisionByZero("rational with zero denominator");
}

}  // namespace

Rational::Rational(long num, long den) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    require_nonzero_den(den);
    v_ = mpq_class(num) / mpq_class(den);
    v_.canonicalize();
}

Rational::Rational(const mpq_class& q) : v_(q) {
    require_nonzero_den(v_.get_den());
    v_.canonicalize();
}

Rational Rational::parse(std::string_view s, bool strict) {
    const std::string text(s);
    std::size_t pos = 0;
    bool neg = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        if (text[pos] == '+' && strict)
            throw std::invalid_argument("non-canonical rational: leading '+'");
        neg = text[pos] == '-';
        ++pos;
    }
    auto read_digits = [&](std::size_t from, std::size_t to) -> std::string {
        if (from == to) throw std::invalid_argument("malformed rational: " + text);
        for (std::size_t i = from; i < to; ++i)
            if (!std::isdigit(static_cast<unsigned char>(text[i])))
                throw std::invalid_argument("malformed rational: " + text);
        return text.substr(from, to - from);
    };
    std::size_t slash = text.find('/', pos);
    std::string num_s, den_s;
    if (slash == std::string::npos) {
        num_s = read_digits(pos, text.size());
        den_s = "1";
    } else {
        num_s = read_digits(pos, slash);
        den_s = read_digits(slash + 1, text.size());
    }
    mpz_class num(num_s), den(den_s);
    if (neg) num = -num;
    if (sgn(den) == 0) throw std::invalid_argument("zero denominator: " + text);
    Rational r(num, den);
    if (strict) {
        // Canonical form writes integers without "/1", keeps lowest terms,
        // and never spells zero as "-0".
        if (r.str() != text)
            throw std::invalid_argument("non-canonical rational: " + text);
    }
    return r;
}

Rational Rational::operator-() const {
    Rational r;
    r.v_ = -v_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    v_ += o.v_;
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    v_ -= o.v_;
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    v_ *= o.v_;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw DivisionByZero();
    v_ /= o.v_;
    return *this;
}

Rational Rational::abs() const {
    return sign() < 0 ? -*this : *this;
}

Rational Rational::pow(long e) const {
    if (e == 0) return Rational(1);
    if (is_zero()) {
        if (e < 0) throw DivisionByZero("0 raised to a negative power");
        return Rational(0);
    }
    mpz_class n, d;
    unsigned long ue = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(n.get_mpz_t(), num().get_mpz_t(), ue);
    mpz_pow_ui(d.get_mpz_t(), den().get_mpz_t(), ue);
    return e > 0 ? Rational(n, d) : Rational(d, n);
}

std::string Rational::str() const {
    if (is_integer()) return num().get_str();
    return num().get_str() + "/" + den().get_str();
}

namespace {

// Splits n into 2^a 5^b * rest.
void split_2_5(mpz_class n, unsigned long& a, unsigned long& b, mpz_class& rest) {
    a = mpz_scan1(n.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(n.get_mpz_t(), n.get_mpz_t(), a);
    b = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), 5)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), 5);
        ++b;
    }
    rest = n;
}

std::string scientific_string(const Rational& r, unsigned sig) {
    // |r| = m * 10^e with 1 <= m < 10; rounds m to `sig` digits, half away
    // from zero.
    mpz_class an = ::abs(r.num());
    const mpz_class& d = r.den();
    long e = static_cast<long>(mpz_sizeinbase(an.get_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 10));
    auto scaled = [&](long k) {
        // floor(an * 10^(sig-1-e') / d) with e' = e+k, plus half-away rounding.
        mpz_class p, q;
        long shift = static_cast<long>(sig) - 1 - (e + k);
        if (shift >= 0) {
            mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(shift));
            p *= an;
            q = d;
        } else {
            mpz_ui_pow_ui(q.get_mpz_t(), 10, static_cast<unsigned long>(-shift));
            q *= d;
            p = an;
        }
        mpz_class quo, rem;
        mpz_fdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
        if (rem * 2 >= q) quo += 1;
        return quo;
    };
    mpz_class lo, hi;
    mpz_ui_pow_ui(lo.get_mpz_t(), 10, sig - 1);
    mpz_ui_pow_ui(hi.get_mpz_t(), 10, sig);
    mpz_class m = scaled(0);
    while (m >= hi) { ++e; m = scaled(0); }
    while (m < lo) { --e; m = scaled(0); }
    std::string digits = m.get_str();
    std::string out;
    if (r.sign() < 0) out += "-";
    out += digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    out += "e";
    out += (e < 0 ? "-" : "+");
    out += std::to_string(e < 0 ? -e : e);
    return out;
}

}  // namespace

std::string Rational::decimal(unsigned sig, unsigned max_frac) const {
    if (is_zero()) return "0";
    if (is_integer()) return num().get_str();
    unsigned long a, b;
    mpz_class rest;
    split_2_5(den(), a, b, rest);
    unsigned long t = std::max(a, b);
    if (rest == 1 && t <= max_frac) {
        mpz_class scale2, scale5, scaled = ::abs(num());
        mpz_ui_pow_ui(scale2.get_mpz_t(), 2, t - a);
        mpz_ui_pow_ui(scale5.get_mpz_t(), 5, t - b);
        scaled *= scale2 * scale5;
        std::string digits = scaled.get_str();
        if (digits.size() <= t) digits.insert(0, t + 1 - digits.size(), '0');
        std::string out;
        if (sign() < 0) out += "-";
        out += digits.substr(0, digits.size() - t);
        std::string frac = digits.substr(digits.size() - t);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        if (!frac.empty()) out += "." + frac;
        return out;
    }
    return scientific_string(*this, sig);
}

namespace {

constexpr std::uint64_t kTrialBound = 1000000;

const std::vector<std::uint32_t>& small_primes() {
    static std::vector<std::uint32_t> primes = [] {
        std::vector<bool> sieve(kTrialBound + 1, true);
        std::vector<std::uint32_t> out;
        for (std::uint64_t i = 2; i <= kTrialBound; ++i) {
            if (!sieve[i]) continue;
            out.push_back(static_cast<std::uint32_t>(i));
            for (std::uint64_t j = i * i; j <= kTrialBound; j += i) sieve[j] = false;
        }
        return out;
    }();
    return primes;
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL,
                            19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // Deterministic witness set for 64-bit integers.
    for (std::uint64_t w : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL,
                            19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod_u64(w, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

Factorization factor_u64(std::uint64_t n) {
    Factorization f;
    for (std::uint32_t p : small_primes()) {
        if (static_cast<std::uint64_t>(p) * p > n) break;
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) { n /= p; ++e; }
            f.primes[mpz_class(p)] = e;
        }
    }
    if (n > 1) {
        if (n <= kTrialBound * kTrialBound || is_prime_u64(n)) {
            // Either below the trial bound squared (hence prime after the
            // sweep above) or certified by the deterministic test.
            f.primes[mpz_class(static_cast<unsigned long>(n))] += 1;
        } else {
            f.composite_cofactor = mpz_class(static_cast<unsigned long>(n));
        }
    }
    return f;
}

}  // namespace

Factorization factor_positive(const mpz_class& n) {
    if (sgn(n) <= 0) throw std::invalid_argument("factor_positive needs n > 0");
    if (n.fits_ulong_p() && sizeof(unsigned long) == 8)
        return factor_u64(n.get_ui());

    Factorization f;
    mpz_class m = n;
    for (std::uint32_t p : small_primes()) {
        mpz_class pp(p);
        if (pp * pp > m) break;
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            unsigned e = 0;
            while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                ++e;
            }
            f.primes[pp] = e;
        }
    }
    if (m > 1) {
        mpz_class bound(kTrialBound);
        if (m <= bound * bound || mpz_probab_prime_p(m.get_mpz_t(), 40) > 0) {
            f.primes[m] += 1;
        } else {
            f.composite_cofactor = m;
        }
    }
    return f;
}

Factorization denominator_factorization(const Rational& r) {
    return factor_positive(r.den());
}

mpz_class Factorization::reconstruct() const {
    mpz_class out(1);
    for (const auto& [p, e] : primes) {
        mpz_class pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        out *= pe;
    }
    if (composite_cofactor) out *= *composite_cofactor;
    return out;
}

bool is_power_of_two(const mpz_class& n) {
    return sgn(n) > 0 && mpz_popcount(n.get_mpz_t()) == 1;
}

bool is_power_of_four(const mpz_class& n) {
    return is_power_of_two(n) && mpz_scan1(n.get_mpz_t(), 0) % 2 == 0;
}

bool has_power_of_two_denominator(const Rational& r) {
    return is_power_of_two(r.den());
}

bool has_power_of_four_denominator(const Rational& r) {
    return is_power_of_four(r.den());
}

Rational binomial(long n, long k) {
    if (k < 0 || k > n || n < 0) return Rational(0);
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return Rational(c);
}

}  // namespace chiang
