#include "chiang/rqc.hpp"

#include <stdexcept>

namespace chiang {

namespace {

constexpr std::array<int, QHElement::kBasisSize> kBasisDegree{0, 2, 4, 6, 4};

void check_basis(int i) {
    if (i < 0 || i >= QHElement::kBasisSize)
        throw std::out_of_range("basis index outside 0..4");
}

}  // namespace

std::string basis_name(int i) {
    check_basis(i);
    static const char* names[] = {"G0", "G1", "G2", "G3", "Gd"};
    return names[i];
}

QHElement QHElement::basis(int i) {
    check_basis(i);
    QHElement e;
    e.comps_[i] = NovikovSeries::monomial(0, Rational(1));
    return e;
}

bool QHElement::is_zero() const {
    for (const auto& c : comps_)
        if (!c.is_zero()) return false;
    return true;
}

QHElement& QHElement::operator+=(const QHElement& o) {
    for (int i = 0; i < kBasisSize; ++i) comps_[i] += o.comps_[i];
    return *this;
}

QHElement& QHElement::operator-=(const QHElement& o) {
    for (int i = 0; i < kBasisSize; ++i) comps_[i] -= o.comps_[i];
    return *this;
}

QHElement& QHElement::operator*=(const NovikovSeries& s) {
    for (auto& c : comps_) c *= s;
    return *this;
}

QHElement& QHElement::operator*=(const Rational& c) {
    for (auto& comp : comps_) comp *= c;
    return *this;
}

std::string QHElement::str() const {
    std::string out;
    for (int i = 0; i < kBasisSize; ++i) {
        for (const auto& [m, c] : comps_[i].terms()) {
            const bool first = out.empty();
            if (!first) out += c.sign() < 0 ? " - " : " + ";
            const Rational shown = first ? c : c.abs();
            std::string piece;
            if (shown == Rational(-1)) piece = "-";
            else if (!(shown == Rational(1))) piece = shown.str() + "·";
            if (m != 0) piece += "q^(" + quarter_exponent_string(m) + ")·";
            piece += basis_name(i);
            out += piece;
        }
    }
    return out.empty() ? "0" : out;
}

std::optional<int> QHElement::homogeneous_degree() const {
    std::optional<int> deg;
    for (int i = 0; i < kBasisSize; ++i) {
        for (const auto& [m, c] : comps_[i].terms()) {
            const int total = kBasisDegree[i] + 2 * m;
            if (!deg) deg = total;
            else if (*deg != total) return std::nullopt;
        }
    }
    return deg;
}

QuantumProduct::QuantumProduct(std::shared_ptr<OpenEngine> open)
    : open_(std::move(open)) {
    if (!open_) throw std::invalid_argument("open engine required");
}

QHElement QuantumProduct::basis_product(int u, int v) {
    check_basis(u);
    check_basis(v);
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = memo_[u][v];
    if (!slot) slot = compute_basis_product(u, v);
    return *slot;
}

QHElement QuantumProduct::compute_basis_product(int u, int v) {
    QHElement out;

    // Sphere contributions: pair the third insertion against the dual basis.
    // Gd restricts to zero on the closed side.
    if (u != QHElement::kDiamond && v != QHElement::kDiamond) {
        ClosedEngine& closed = open_->closed();
        for (int d = 0; d <= 2; ++d)
            for (int l = 0; l <= 3; ++l) {
                const Rational g = closed.invariant_indices(d, {u, v, l});
                if (g.is_zero()) continue;
                out[3 - l] += NovikovSeries::monomial(4 * d, g);
            }
    }

    // Disk contributions land on the Gd component.
    for (int beta = 0; beta <= 8; ++beta) {
        RawConstraints raw;
        for (int w : {u, v}) {
            switch (w) {
                case 0: ++raw.c0; break;
                case 1: ++raw.c1; break;
                case 2: ++raw.c2; break;
                case 3: ++raw.c3; break;
                default: ++raw.cd; break;
            }
        }
        const Rational o = open_->invariant(beta, 0, raw);
        if (o.is_zero()) continue;
        out[QHElement::kDiamond] += NovikovSeries::monomial(beta, o);
    }
    return out;
}

QHElement QuantumProduct::product(const QHElement& x, const QHElement& y) {
    QHElement out;
    for (int i = 0; i < QHElement::kBasisSize; ++i) {
        if (x[i].is_zero()) continue;
        for (int j = 0; j < QHElement::kBasisSize; ++j) {
            if (y[j].is_zero()) continue;
            out += basis_product(i, j) * (x[i] * y[j]);
        }
    }
    return out;
}

PresentationReport QuantumProduct::verify_presentation() {
    const QHElement x = QHElement::basis(1);
    const QHElement y = QHElement::basis(QHElement::kDiamond);
    const QHElement x2 = product(x, x);
    const QHElement x3 = product(x2, x);
    const QHElement x4 = product(x3, x);

    const NovikovSeries q = NovikovSeries::monomial(4, Rational(1));
    const NovikovSeries q14 = NovikovSeries::monomial(1, Rational(1));
    const NovikovSeries q12 = NovikovSeries::monomial(2, Rational(1));

    PresentationReport report;
    auto add = [&](std::string name, std::string statement, QHElement residual) {
        RelationResult r;
        r.name = std::move(name);
        r.statement = std::move(statement);
        r.holds = residual.is_zero();
        r.residual = std::move(residual);
        report.relations.push_back(std::move(r));
    };

    add("x^2", "x·x = G2", x2 - QHElement::basis(2));
    add("x^3", "x^3 = G3 + 1/16·q^(1/4)·Gd",
        x3 - (QHElement::basis(3) + QHElement(y) * (q14 * Rational(1, 16))));
    add("r1", "x^4 - q·G0 + 35/64·q^(1/2)·Gd = 0",
        x4 - QHElement::basis(0) * q + QHElement(y) * (q12 * Rational(35, 64)));
    add("r2", "y·y - 5/4·q^(1/2)·Gd = 0",
        product(y, y) - QHElement(y) * (q12 * Rational(5, 4)));
    add("r3", "x·y + 3/4·q^(1/4)·Gd = 0",
        product(x, y) + QHElement(y) * (q14 * Rational(3, 4)));

    report.all_hold = true;
    for (const auto& r : report.relations) report.all_hold = report.all_hold && r.holds;
    return report;
}

AssociativityReport QuantumProduct::associativity_check() {
    AssociativityReport rep;
    for (int a = 0; a < QHElement::kBasisSize; ++a)
        for (int b = 0; b < QHElement::kBasisSize; ++b) {
            if (!(basis_product(a, b) == basis_product(b, a)))
                rep.failed_pairs.push_back({a, b});
            ++rep.pairs_checked;
        }
    for (int a = 0; a < QHElement::kBasisSize; ++a)
        for (int b = 0; b < QHElement::kBasisSize; ++b)
            for (int c = 0; c < QHElement::kBasisSize; ++c) {
                const QHElement lhs =
                    product(basis_product(a, b), QHElement::basis(c));
                const QHElement rhs =
                    product(QHElement::basis(a), basis_product(b, c));
                if (!(lhs == rhs)) rep.failed_triples.push_back({a, b, c});
                ++rep.triples_checked;
            }
    rep.associative = rep.failed_triples.empty();
    rep.commutative = rep.failed_pairs.empty();
    return rep;
}

}  // namespace chiang
