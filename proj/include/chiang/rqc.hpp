#ifndef CHIANG_RQC_HPP
#define CHIANG_RQC_HPP

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "chiang/novikov.hpp"
#include "chiang/open_gw.hpp"

namespace chiang {

// Element of the deformed cohomology module over the Novikov ring, written
// on the basis G0, G1, G2, G3, Gd.
class QHElement {
public:
    static constexpr int kBasisSize = 5;
    static constexpr int kDiamond = 4;

    QHElement() = default;

    static QHElement basis(int i);
    static QHElement zero() { return QHElement(); }

    NovikovSeries& operator[](int i) { return comps_.at(i); }
    const NovikovSeries& operator[](int i) const { return comps_.at(i); }

    bool is_zero() const;

    QHElement& operator+=(const QHElement& o);
    QHElement& operator-=(const QHElement& o);
    QHElement& operator*=(const NovikovSeries& s);
    QHElement& operator*=(const Rational& c);

    friend QHElement operator+(QHElement a, const QHElement& b) { return a += b; }
    friend QHElement operator-(QHElement a, const QHElement& b) { return a -= b; }
    friend QHElement operator*(QHElement a, const NovikovSeries& s) { return a *= s; }
    friend QHElement operator*(const NovikovSeries& s, QHElement a) { return a *= s; }
    friend QHElement operator*(QHElement a, const Rational& c) { return a *= c; }
    friend QHElement operator*(const Rational& c, QHElement a) { return a *= c; }

    friend bool operator==(const QHElement& a, const QHElement& b) {
        return a.comps_ == b.comps_;
    }

    // Formal sum "c·q^(m/4)·Gj", zero printed as "0".
    std::string str() const;

    // Degree of a homogeneous element (basis degrees 0,2,4,6 and 4 for Gd;
    // q^(1/4) carries degree 2); nullopt when mixed or zero.
    std::optional<int> homogeneous_degree() const;

private:
    std::array<NovikovSeries, kBasisSize> comps_;
};

std::string basis_name(int i);  // "G0".."G3", "Gd"

struct RelationResult {
    std::string name;
    std::string statement;
    QHElement residual;
    bool holds = false;
};

struct PresentationReport {
    std::vector<RelationResult> relations;
    bool all_hold = false;
};

struct AssociativityReport {
    int triples_checked = 0;
    int pairs_checked = 0;
    std::vector<std::array<int, 3>> failed_triples;
    std::vector<std::array<int, 2>> failed_pairs;
    bool associative = false;
    bool commutative = false;
    bool ok() const { return associative && commutative; }
};

// The small deformed product on span{G0..G3, Gd}.  Closed structure
// constants come from three-point sphere invariants, the Gd component from
// boundaryless disk invariants.
class QuantumProduct {
public:
    explicit QuantumProduct(std::shared_ptr<OpenEngine> open);

    QHElement basis_product(int u, int v);
    QHElement product(const QHElement& x, const QHElement& y);

    // Checks the presentation of the ring in the generators x = G1 and
    // y = Gd: the expressions for x^2, x^3, and the three defining
    // relations x^4 - q + (35/64) q^(1/2) y,  y^2 - (5/4) q^(1/2) y,
    // x y + (3/4) q^(1/4) y.
    PresentationReport verify_presentation();

    // Associativity over all 125 basis triples and commutativity over the
    // 25 pairs.
    AssociativityReport associativity_check();

private:
    QHElement compute_basis_product(int u, int v);

    std::shared_ptr<OpenEngine> open_;
    std::mutex mu_;
    std::array<std::array<std::optional<QHElement>, 5>, 5> memo_;
};

}  // namespace chiang

#endif  // CHIANG_RQC_HPP
