#include "chiang/open_gw.hpp"

#include <stdexcept>
#include <string>
#include <utility>

#include "chiang/errors.hpp"

namespace chiang {

namespace {

constexpr OpenKey kBase11{1, 1, 0, 0};
constexpr OpenKey kBase102{1, 0, 1, 0};
constexpr OpenKey kBase203{2, 0, 0, 1};
// Divisor of the k-reduction: OGW(beta=2, k=0; G2, G2).
constexpr OpenKey kQuotientKey{2, 0, 2, 0};

std::string key_str(const OpenKey& k) {
    return "(" + std::to_string(k.beta) + "," + std::to_string(k.k) + "," +
           std::to_string(k.l2) + "," + std::to_string(k.l3) + ")";
}

void validate_key(const OpenKey& key) {
    if (key.beta < 0 || key.k < 0 || key.l2 < 0 || key.l3 < 0)
        throw std::invalid_argument("open key has a negative entry");
    if (key.beta != key.k + key.l2 + 2 * key.l3)
        throw std::invalid_argument("open key " + key_str(key) +
                                    " violates degree balance");
}

void validate_raw(const RawConstraints& raw) {
    if (raw.c0 < 0 || raw.c1 < 0 || raw.c2 < 0 || raw.c3 < 0 || raw.cd < 0)
        throw std::invalid_argument("negative constraint count");
}

// Adds one interior constraint by index; false when the class is zero
// (indices outside 0..3), which kills the whole term.
bool add_index(RawConstraints& raw, int idx) {
    switch (idx) {
        case 0: ++raw.c0; return true;
        case 1: ++raw.c1; return true;
        case 2: ++raw.c2; return true;
        case 3: ++raw.c3; return true;
        default: return false;
    }
}

}  // namespace

std::vector<Split> multiset_splits(int l2, int l3) {
    if (l2 < 0 || l3 < 0) throw std::invalid_argument("negative multiset size");
    std::vector<Split> out;
    out.reserve(static_cast<std::size_t>(l2 + 1) * (l3 + 1));
    for (int a2 = 0; a2 <= l2; ++a2)
        for (int a3 = 0; a3 <= l3; ++a3)
            out.push_back(Split{a2, a3, binomial(l2, a2) * binomial(l3, a3)});
    return out;
}

OpenEngine::OpenEngine(std::shared_ptr<ClosedEngine> closed,
                       BasicInvariants basics, int beta_max)
    : closed_(std::move(closed)), basics_(std::move(basics)), beta_max_(beta_max) {
    if (!closed_) throw std::invalid_argument("closed engine required");
    if (beta_max_ < 2) throw std::invalid_argument("beta_max must be at least 2");
}

NormalizeResult OpenEngine::normalize(int beta, int k, const RawConstraints& raw) {
    if (k < 0) throw std::invalid_argument("negative boundary count");
    validate_raw(raw);
    if (beta < 0) return NormalizeResult::zero();

    // Each point-like constraint trades for one boundary point and a sign.
    Rational coeff(raw.cd % 2 == 0 ? 1 : -1);
    k += raw.cd;

    const int l_total = raw.c0 + raw.c1 + raw.c2 + raw.c3;
    if (raw.c0 > 0) {
        // Unit constraint: everything dies except the single closed form in
        // class zero with one boundary point.
        if (beta == 0 && k == 1 && l_total == 1)
            return NormalizeResult::value(coeff * Rational(-1));
        return NormalizeResult::zero();
    }
    if (beta == 0) return NormalizeResult::zero();

    coeff *= Rational(beta, 4).pow(raw.c1);

    if (beta != k + raw.c2 + 2 * raw.c3) return NormalizeResult::zero();
    return NormalizeResult::key(std::move(coeff), OpenKey{beta, k, raw.c2, raw.c3});
}

Rational OpenEngine::invariant(const OpenKey& key) {
    validate_key(key);
    if (key.beta > beta_max_)
        throw std::out_of_range("beta " + std::to_string(key.beta) +
                                " exceeds beta_max " + std::to_string(beta_max_));
    Ctx ctx;
    ctx.root_beta = key.beta;
    return eval(key, ctx);
}

Rational OpenEngine::invariant(int beta, int k, const RawConstraints& raw) {
    const NormalizeResult n = normalize(beta, k, raw);
    switch (n.kind()) {
        case NormalizeResult::Kind::Zero: return Rational(0);
        case NormalizeResult::Kind::Value: return n.scalar();
        case NormalizeResult::Kind::Key: break;
    }
    return n.scalar() * invariant(n.key());
}

Rational OpenEngine::eval(const OpenKey& key, Ctx& ctx) {
    if (key.beta == 0) return Rational(0);
    if (key.beta > ctx.root_beta)
        throw std::logic_error("open recursion ascended to " + key_str(key));
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    if (ctx.in_progress.count(key)) {
        std::string msg = "cyclic dependency:";
        for (const OpenKey& s : ctx.stack) msg += " " + key_str(s) + " ->";
        msg += " " + key_str(key);
        throw CyclicDependency(msg);
    }
    ctx.stack.push_back(key);
    ctx.in_progress.insert(key);
    const Rational v = dispatch(key, ctx);
    ctx.in_progress.erase(key);
    ctx.stack.pop_back();
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto [it, inserted] = memo_.emplace(key, v);
        if (!inserted && !(it->second == v))
            throw std::logic_error("memo conflict at " + key_str(key));
    }
    return v;
}

Rational OpenEngine::dispatch(const OpenKey& key, Ctx& ctx) {
    if (key == kBase11) { ++n_base_; return basics_.v11; }
    if (key == kBase102) { ++n_base_; return basics_.v102; }
    if (key == kBase203) { ++n_base_; return basics_.v203; }
    const int l = key.l2 + key.l3;
    if (l >= 2) { ++n_c_; return rec_c(key, ctx); }
    if (key.k >= 2) { ++n_b_; return rec_b(key, ctx); }
    if (key.k == 1 && l == 1) {
        ++n_a_;
        return rec_a(key, ctx);
    }
    // Degree balance leaves no other shapes: k+l2+2l3 = beta >= 1 with
    // k <= 1 and l <= 1 is one of the bases or the cases above.
    throw std::logic_error("no reduction route for " + key_str(key));
}

Rational OpenEngine::eval_factor(const Factor& f, Ctx& ctx) {
    const NormalizeResult n = normalize(f.beta, f.k, f.raw);
    switch (n.kind()) {
        case NormalizeResult::Kind::Zero: return Rational(0);
        case NormalizeResult::Kind::Value: return n.scalar();
        case NormalizeResult::Kind::Key: break;
    }
    return n.scalar() * eval(n.key(), ctx);
}

Rational OpenEngine::term_product(const Factor& f1, const Factor& f2, Ctx& ctx) {
    // Normalize both sides before evaluating either: whenever one factor
    // sits above the key being reduced, its partner is killed by an axiom,
    // and this ordering guarantees the recursion only ever moves down.
    const NormalizeResult n1 = normalize(f1.beta, f1.k, f1.raw);
    if (n1.is_zero()) return Rational(0);
    const NormalizeResult n2 = normalize(f2.beta, f2.k, f2.raw);
    if (n2.is_zero()) return Rational(0);

    Rational v1 = n1.kind() == NormalizeResult::Kind::Value
                      ? n1.scalar()
                      : n1.scalar() * eval(n1.key(), ctx);
    if (v1.is_zero()) return Rational(0);
    Rational v2 = n2.kind() == NormalizeResult::Kind::Value
                      ? n2.scalar()
                      : n2.scalar() * eval(n2.key(), ctx);
    return v1 * v2;
}

// Route (a): trades the first interior constraint against a boundary point.
// Needs at least one boundary point and one interior constraint.
Rational OpenEngine::rec_a(const OpenKey& key, Ctx& ctx) {
    if (key.k != 1 || key.l2 + key.l3 != 1) ++n_a_unexpected_;
    const int j1 = key.l2 > 0 ? 2 : 3;
    const int r2 = key.l2 - (j1 == 2 ? 1 : 0);
    const int r3 = key.l3 - (j1 == 3 ? 1 : 0);
    const auto splits = multiset_splits(r2, r3);

    Rational acc(0);

    // A closed sphere absorbs the traded constraint together with a divisor.
    for (int bhat = 1; key.beta - 4 * bhat >= 0; ++bhat) {
        const int b1 = key.beta - 4 * bhat;
        for (const Split& s : splits) {
            for (int i = 0; i <= 3; ++i) {
                std::array<int, 4> cc{0, 1, s.a2, s.a3};
                ++cc[j1 - 1];
                ++cc[i];
                const Rational g = closed_->invariant(bhat, cc);
                if (g.is_zero()) continue;
                Factor f{b1, key.k, RawConstraints{0, 0, r2 - s.a2, r3 - s.a3, 0}};
                add_index(f.raw, 3 - i);
                const Rational o = eval_factor(f, ctx);
                if (o.is_zero()) continue;
                acc -= s.weight * g * o;
            }
        }
    }

    // Disk bubbling: the boundary points distribute binomially.
    for (int b1 = 0; b1 <= key.beta; ++b1) {
        const int b2 = key.beta - b1;
        for (int k1 = 0; k1 + 1 <= key.k; ++k1) {
            const int k2 = key.k - 1 - k1;
            const Rational bin = binomial(key.k - 1, k1);
            for (const Split& s : splits) {
                const RawConstraints raw1{0, 0, s.a2, s.a3, 0};
                const RawConstraints raw2{0, 0, r2 - s.a2, r3 - s.a3, 0};

                Factor f1{b1, k1, raw1};
                add_index(f1.raw, j1 - 1);
                add_index(f1.raw, 1);
                Factor f2{b2, k2 + 2, raw2};
                acc += bin * s.weight * term_product(f1, f2, ctx);

                Factor g1{b1, k1 + 1, raw1};
                add_index(g1.raw, j1 - 1);
                Factor g2{b2, k2 + 1, raw2};
                add_index(g2.raw, 1);
                acc -= bin * s.weight * term_product(g1, g2, ctx);
            }
        }
    }
    return acc;
}

// Route (b): reduces the boundary point count by one at the cost of a
// division by OGW(2,0; G2,G2).  Needs k >= 2.
Rational OpenEngine::rec_b(const OpenKey& key, Ctx& ctx) {
    const Rational quot = eval(kQuotientKey, ctx);
    if (quot.is_zero())
        throw DivisorZero("k-reduction divisor OGW(2,0;G2,G2) vanishes");
    const auto splits = multiset_splits(key.l2, key.l3);

    Rational acc(0);

    // Closed-open exchange; class bookkeeping runs two units above beta, and
    // the overshooting summands die in normalize before they can recurse.
    for (int bhat = 0; key.beta + 2 - 4 * bhat >= 0; ++bhat) {
        const int b1 = key.beta + 2 - 4 * bhat;
        for (const Split& s : splits) {
            for (int i = 0; i <= 3; ++i) {
                std::array<int, 4> cc{0, 0, 2 + s.a2, s.a3};
                ++cc[i];
                const Rational g = closed_->invariant(bhat, cc);
                if (g.is_zero()) continue;
                Factor f{b1, key.k - 1,
                         RawConstraints{0, 0, key.l2 - s.a2, key.l3 - s.a3, 0}};
                add_index(f.raw, 3 - i);
                const Rational o = eval_factor(f, ctx);
                if (o.is_zero()) continue;
                acc += s.weight * g * o;
            }
        }
    }

    for (int b1 = 0; b1 <= key.beta + 2; ++b1) {
        const int b2 = key.beta + 2 - b1;
        for (int k1 = 0; k1 + 2 <= key.k; ++k1) {
            const int k2 = key.k - 2 - k1;
            const Rational bin = binomial(key.k - 2, k1);
            for (const Split& s : splits) {
                const RawConstraints raw1{0, 0, s.a2, s.a3, 0};
                const RawConstraints raw2{0, 0, key.l2 - s.a2, key.l3 - s.a3, 0};

                Factor f1{b1, k1 + 1, raw1};
                add_index(f1.raw, 2);
                Factor f2{b2, k2 + 1, raw2};
                add_index(f2.raw, 2);
                acc += bin * s.weight * term_product(f1, f2, ctx);

                // The moved term: the key itself times the divisor.
                if (b1 == key.beta && k1 == key.k - 2) continue;
                Factor g1{b1, k1 + 2, raw1};
                Factor g2{b2, k2, raw2};
                add_index(g2.raw, 2);
                add_index(g2.raw, 2);
                acc -= bin * s.weight * term_product(g1, g2, ctx);
            }
        }
    }
    return acc / quot;
}

// Route (c): rewrites a product of two interior constraints, lowering the
// smaller index and raising the larger.  Needs l2 + l3 >= 2.
Rational OpenEngine::rec_c(const OpenKey& key, Ctx& ctx) {
    int j1, j2, r2 = key.l2, r3 = key.l3;
    if (key.l2 >= 2) {
        j1 = j2 = 2;
        r2 -= 2;
    } else if (key.l2 == 1) {
        j1 = 2;
        j2 = 3;
        --r2;
        --r3;
    } else {
        j1 = j2 = 3;
        r3 -= 2;
    }
    const auto splits = multiset_splits(r2, r3);

    // Leading exchange: G_{j1} G_{j2} -> G_{j1-1} G_{j2+1}; dies when j2 = 3.
    Factor lead{key.beta, key.k, RawConstraints{0, 0, r2, r3, 0}};
    bool live = add_index(lead.raw, j1 - 1);
    if (live) live = add_index(lead.raw, j2 + 1);
    Rational acc = live ? eval_factor(lead, ctx) : Rational(0);

    for (int bhat = 1; key.beta - 4 * bhat >= 0; ++bhat) {
        const int b1 = key.beta - 4 * bhat;
        for (const Split& s : splits) {
            for (int i = 0; i <= 3; ++i) {
                std::array<int, 4> ca{0, 1, s.a2, s.a3};
                ++ca[j2];
                ++ca[i];
                const Rational ga = closed_->invariant(bhat, ca);
                if (!ga.is_zero()) {
                    Factor f{b1, key.k,
                             RawConstraints{0, 0, r2 - s.a2, r3 - s.a3, 0}};
                    add_index(f.raw, 3 - i);
                    add_index(f.raw, j1 - 1);
                    const Rational o = eval_factor(f, ctx);
                    if (!o.is_zero()) acc += s.weight * ga * o;
                }
                std::array<int, 4> cb{0, 1, s.a2, s.a3};
                ++cb[j1 - 1];
                ++cb[i];
                const Rational gb = closed_->invariant(bhat, cb);
                if (!gb.is_zero()) {
                    Factor f{b1, key.k,
                             RawConstraints{0, 0, r2 - s.a2, r3 - s.a3, 0}};
                    add_index(f.raw, 3 - i);
                    add_index(f.raw, j2);
                    const Rational o = eval_factor(f, ctx);
                    if (!o.is_zero()) acc -= s.weight * gb * o;
                }
            }
        }
    }

    for (int b1 = 0; b1 <= key.beta; ++b1) {
        const int b2 = key.beta - b1;
        for (int k1 = 0; k1 <= key.k; ++k1) {
            const int k2 = key.k - k1;
            const Rational bin = binomial(key.k, k1);
            for (const Split& s : splits) {
                const RawConstraints raw1{0, 0, s.a2, s.a3, 0};
                const RawConstraints raw2{0, 0, r2 - s.a2, r3 - s.a3, 0};

                Factor f1{b1, k1, raw1};
                add_index(f1.raw, 1);
                add_index(f1.raw, j1 - 1);
                Factor f2{b2, k2 + 1, raw2};
                add_index(f2.raw, j2);
                acc += bin * s.weight * term_product(f1, f2, ctx);

                Factor g1{b1, k1, raw1};
                add_index(g1.raw, 1);
                add_index(g1.raw, j2);
                Factor g2{b2, k2 + 1, raw2};
                add_index(g2.raw, j1 - 1);
                acc -= bin * s.weight * term_product(g1, g2, ctx);
            }
        }
    }
    return acc;
}

Rational OpenEngine::recursion_a(const OpenKey& key) {
    validate_key(key);
    if (key.k < 1 || key.l2 + key.l3 < 1)
        throw std::invalid_argument("route (a) needs k >= 1 and a constraint");
    if (key.beta > beta_max_) throw std::out_of_range("beta exceeds beta_max");
    ++n_a_;
    Ctx ctx;
    ctx.root_beta = key.beta;
    return rec_a(key, ctx);
}

Rational OpenEngine::recursion_b(const OpenKey& key) {
    validate_key(key);
    if (key.k < 2) throw std::invalid_argument("route (b) needs k >= 2");
    if (key.beta > beta_max_) throw std::out_of_range("beta exceeds beta_max");
    ++n_b_;
    Ctx ctx;
    ctx.root_beta = key.beta;
    return rec_b(key, ctx);
}

Rational OpenEngine::recursion_c(const OpenKey& key) {
    validate_key(key);
    if (key.l2 + key.l3 < 2)
        throw std::invalid_argument("route (c) needs two constraints");
    if (key.beta > beta_max_) throw std::out_of_range("beta exceeds beta_max");
    ++n_c_;
    Ctx ctx;
    ctx.root_beta = key.beta;
    return rec_c(key, ctx);
}

OpenEngine::DispatchStats OpenEngine::stats() const {
    DispatchStats s;
    s.base = n_base_.load();
    s.rec_a = n_a_.load();
    s.rec_b = n_b_.load();
    s.rec_c = n_c_.load();
    s.rec_a_unexpected = n_a_unexpected_.load();
    return s;
}

std::map<OpenKey, Rational> OpenEngine::snapshot() const {
    std::lock_guard<std::mutex> lock(mu_);
    return memo_;
}

void OpenEngine::import(const std::map<OpenKey, Rational>& values) {
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto& [key, value] : values) {
        if (key.beta < 1 || key.k < 0 || key.l2 < 0 || key.l3 < 0 ||
            key.beta != key.k + key.l2 + 2 * key.l3)
            throw CacheFormatError("open cache key " + key_str(key) +
                                   " out of range");
        auto it = memo_.find(key);
        if (it != memo_.end() && !(it->second == value))
            throw CacheFormatError("open cache value conflict at " + key_str(key));
        memo_.insert_or_assign(key, value);
    }
}

void OpenEngine::clear() {
    std::lock_guard<std::mutex> lock(mu_);
    memo_.clear();
    n_base_ = n_a_ = n_b_ = n_c_ = n_a_unexpected_ = 0;
}

}  // namespace chiang
