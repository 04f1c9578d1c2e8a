#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "elemrank/errors.hpp"
#include "elemrank/group_expr.hpp"
#include "elemrank/ordinal.hpp"

namespace elemrank {

/// One applied rewrite in a rank derivation. `law` states the identity or
/// bound the step used; `inputs` are the sub-results it consumed.
struct TraceStep {
    std::string rule;
    std::string law;
    std::vector<std::string> inputs;
    std::string value;

    friend bool operator==(const TraceStep& a, const TraceStep& b) {
        return a.rule == b.rule && a.law == b.law && a.inputs == b.inputs && a.value == b.value;
    }
};

/// Exact ordinal or ordinal interval plus the derivation that produced it.
/// Exact(a) and Interval(a, a) are the same value.
class RankResult {
public:
    RankResult(Ordinal lo, Ordinal hi, std::vector<TraceStep> trace)
        : lo_(std::move(lo)), hi_(std::move(hi)), trace_(std::move(trace)) {
        if (lo_ > hi_) throw EvalError("rank interval with lo > hi");
    }

    bool exact() const { return lo_ == hi_; }
    const Ordinal& value() const {
        if (!exact()) throw EvalError("interval rank where an exact rank is required");
        return lo_;
    }
    const Ordinal& lo() const { return lo_; }
    const Ordinal& hi() const { return hi_; }
    const std::vector<TraceStep>& trace() const { return trace_; }

    std::string value_string() const {
        return exact() ? to_string(lo_) : "[" + to_string(lo_) + ", " + to_string(hi_) + "]";
    }

private:
    Ordinal lo_, hi_;
    std::vector<TraceStep> trace_;
};

struct EvalOptions {
    /// When false, the additive wreath law that relies on witnessing chains is
    /// disabled and such nodes fall back to the two-sided bounds.
    bool assume_witnessing = true;
};

namespace detail {

struct Bounds {
    Ordinal lo, hi;
    bool exact() const { return lo == hi; }
    std::string str() const {
        return exact() ? to_string(lo) : "[" + to_string(lo) + ", " + to_string(hi) + "]";
    }
};

/// Ranks are never limits, so a limit lower bound can be raised by one.
inline Ordinal raise_limit(const Ordinal& o) { return o.is_limit() ? successor(o) : o; }

class Evaluator {
public:
    explicit Evaluator(EvalOptions opts) : opts_(opts) {}

    Bounds eval(const GroupExpr& e) {
        switch (e.kind()) {
        case NodeKind::Trivial: {
            Bounds b{Ordinal::from_int(1), Ordinal::from_int(1)};
            step("trivial", "xi(1) = 1", {}, b);
            return b;
        }
        case NodeKind::Profinite: {
            Bounds b = rank_two();
            step("profinite-atom", "profinite groups have trivial discrete residual, xi = 2", {},
                 b);
            return b;
        }
        case NodeKind::Discrete: {
            Bounds b = rank_two();
            step("discrete-atom",
                 "countable discrete groups are unions of finitely generated open subgroups, "
                 "xi = 2",
                 {}, b);
            return b;
        }
        case NodeKind::Seed: {
            Bounds b = rank_two();
            step("seed-atom", "seed hypothesis: xi = 2", {}, b);
            return b;
        }
        case NodeKind::Prod: {
            Bounds acc = eval(e.child(0));
            std::vector<std::string> in{acc.str()};
            for (std::size_t i = 1; i < e.children().size(); ++i) {
                Bounds c = eval(e.children()[i]);
                in.push_back(c.str());
                acc.lo = std::max(acc.lo, c.lo);
                acc.hi = std::max(acc.hi, c.hi);
            }
            step("product-sup", "xi(G1 x ... x Gn) = sup_i xi(Gi)", std::move(in), acc);
            return acc;
        }
        case NodeKind::Ldp: {
            // sup+ of a constant family of successors is the value itself, for
            // finite and countably infinite multiplicity alike.
            Bounds c = eval(e.child(0));
            Bounds b{sup_plus(ConstantFamily{c.lo}), sup_plus(ConstantFamily{c.hi})};
            step("local-direct-product", "xi(LDP_X(G, U)) = sup+ xi(G)", {c.str()}, b);
            return b;
        }
        case NodeKind::LdpFamily: {
            // Member n of the family has rank w^n + 2.
            Ordinal v = sup_plus(OmegaPowerFamily{1, Ordinal::from_int(2)});
            Bounds b{v, v};
            step("local-direct-product-family", "xi(LDP_n F_n) = sup+ (w^n + 2) = w^w + 1", {}, b);
            return b;
        }
        case NodeKind::Ext: {
            Bounds n = eval(e.child(0));
            Bounds q = eval(e.child(1));
            Bounds b{raise_limit(std::max(n.lo, q.lo)), add(predecessor(n.hi), q.hi)};
            step("extension-bounds",
                 "max(xi(N), xi(G/N)) <= xi(G) <= xi(N) - 1 + xi(G/N)", {n.str(), q.str()}, b);
            return b;
        }
        case NodeKind::CocompactExt: {
            Bounds n = eval(e.child(0));
            step("cocompact-normal", "xi(G) = xi(N) for cocompact closed normal N", {n.str()}, n);
            return n;
        }
        case NodeKind::Wreath:
            return wreath(e.child(0), e.child(1));
        case NodeKind::Power: {
            // (G)_n = G wr (G)_{n-1}; the child is evaluated once.
            Bounds c = eval(e.child(0));
            Bounds acc = c;
            AttributeSet ca = infer_attributes(e.child(0));
            AttributeSet ka = ca;
            for (std::uint64_t i = 1; i < e.count(); ++i) {
                acc = wreath_bounds(e.child(0), c, ca, acc, ka, "iterated ");
                ka = detail::wreath_attrs(ca, ka);
            }
            return acc;
        }
        case NodeKind::Ex: {
            Bounds c = eval(e.child(0));
            Bounds b{ex_formula(c.lo), ex_formula(c.hi)};
            step("tree-extension",
                 "xi(E_X(G, U)) = w^(b+1) + 2, b the leading exponent of xi(G)", {c.str()}, b);
            return b;
        }
        case NodeKind::Fn:
            return fn_rank(e.count());
        case NodeKind::Residual: {
            Bounds c = eval(e.child(0));
            if (!c.exact())
                throw EvalError("discrete residual requires an exact compactly generated rank");
            Bounds b{predecessor(c.lo), predecessor(c.lo)};
            step("discrete-residual", "xi(G) = xi(Res(G)) + 1", {c.str()}, b);
            return b;
        }
        }
        throw Error("unreachable node kind");
    }

    std::vector<TraceStep> take_trace() { return std::move(trace_); }

private:
    static Bounds rank_two() { return Bounds{Ordinal::from_int(2), Ordinal::from_int(2)}; }

    void step(std::string rule, std::string law, std::vector<std::string> inputs,
              const Bounds& b) {
        trace_.push_back(TraceStep{std::move(rule), std::move(law), std::move(inputs), b.str()});
    }

    static Ordinal ex_formula(const Ordinal& child_rank) {
        Ordinal beta = leading_exponent(child_rank);
        return add(Ordinal::omega_power(successor(beta)), Ordinal::from_int(2));
    }

    Bounds wreath(const GroupExpr& l, const GroupExpr& k) {
        Bounds lb = eval(l);
        Bounds kb = eval(k);
        return wreath_bounds(l, lb, infer_attributes(l), kb, infer_attributes(k), "");
    }

    Bounds wreath_bounds(const GroupExpr& l, const Bounds& lb, const AttributeSet& la,
                         const Bounds& kb, const AttributeSet& ka, const std::string& tag) {
        (void)l;
        bool hyp = la.nontrivial && ka.nontrivial && la.compactly_generated
                   && ka.compactly_generated && la.dense_u;
        // Chains in this algebra always start at a block acting transitively on
        // an infinite set, so a chain on K is enough for the additive law.
        if (hyp && ka.has_witnessing_chain && opts_.assume_witnessing) {
            Bounds b{add(predecessor(lb.lo), kb.lo), add(predecessor(lb.hi), kb.hi)};
            step(tag + "wreath-exact", "xi(L wr_U (K, X)) = xi(L) - 1 + xi(K)",
                 {lb.str(), kb.str()}, b);
            return b;
        }
        if (hyp && kb.exact() && kb.lo == Ordinal::from_int(2) && ka.transitive_permutation) {
            Bounds b{successor(lb.lo), successor(lb.hi)};
            step(tag + "wreath-plus-one", "xi(K) = 2 implies xi(L wr_U (K, X)) = xi(L) + 1",
                 {lb.str(), kb.str()}, b);
            return b;
        }
        if (hyp) {
            // xi(L) + a <= xi(L wr K) <= xi(L) - 1 + xi(K), with xi(K) = a + 2.
            Ordinal lo = std::max(lb.lo, kb.lo);
            Ordinal pk = predecessor(kb.lo);
            if (pk.is_successor()) lo = std::max(lo, add(lb.lo, predecessor(pk)));
            Bounds b{raise_limit(lo), add(predecessor(lb.hi), kb.hi)};
            step(tag + "wreath-interval",
                 "xi(L) + a <= xi(L wr_U (K, X)) <= xi(L) - 1 + xi(K) where xi(K) = a + 2",
                 {lb.str(), kb.str()}, b);
            return b;
        }
        // No dense normal closure on the base: closed-subgroup lower bound,
        // plus one when the acting factor is not residually discrete.
        Ordinal lo = std::max(lb.lo, kb.lo);
        std::string law = "max(xi(L), xi(K)) <= xi(L wr_U (K, X)) <= xi(L) - 1 + xi(K)";
        if (la.nontrivial && ka.nontrivial && la.compactly_generated && ka.compactly_generated
            && kb.lo >= Ordinal::from_int(3)) {
            lo = std::max(lo, successor(lb.lo));
            law = "xi(L) + 1 <= xi(L wr_U (K, X)) <= xi(L) - 1 + xi(K) for K not residually "
                  "discrete";
        }
        Bounds b{raise_limit(lo), add(predecessor(lb.hi), kb.hi)};
        step(tag + "wreath-weak-interval", law, {lb.str(), kb.str()}, b);
        return b;
    }

    /// Replays the defining derivation of F_n: a tree extension, a
    /// rank-preserving perfection step, then a faithful quotient by a compact
    /// kernel squeezed with the absorption 2 + a = a for a >= w.
    Bounds fn_rank(std::uint64_t n) {
        Bounds r = rank_two();
        step("seed-atom", "F_0(G) = G, xi = 2", {}, r);
        for (std::uint64_t k = 1; k <= n; ++k) {
            Bounds exb{ex_formula(r.lo), ex_formula(r.lo)};
            step("tree-extension", "xi(E) = w^(b+1) + 2 over the previous stage", {r.str()}, exb);
            step("perfection", "the perfect hull keeps the rank: xi(E') = xi(E)", {exb.str()},
                 exb);
            Ordinal candidate = exb.lo;
            if (add(Ordinal::from_int(2), candidate) != candidate)
                throw EvalError("absorption 2 + a = a failed in the F_n derivation");
            r = Bounds{candidate, candidate};
            step("compact-kernel-quotient",
                 "xi(F) <= xi(E') <= 2 + xi(F) pins xi(F) = xi(E') by absorption", {exb.str()},
                 r);
        }
        Ordinal expected =
            add(pow(Ordinal::omega(), Ordinal::from_int(BigInt(n))), Ordinal::from_int(2));
        if (r.lo != expected) throw EvalError("F_n derivation disagrees with w^n + 2");
        return r;
    }

    EvalOptions opts_;
    std::vector<TraceStep> trace_;
};

} // namespace detail

/// Evaluate the decomposition rank of a well-formed expression.
inline RankResult eval_rank(const GroupExpr& e, const EvalOptions& opts = {}) {
    auto violations = well_formed(e);
    if (!violations.empty()) throw IllFormedError(std::move(violations));
    detail::Evaluator ev(opts);
    detail::Bounds b = ev.eval(e);
    return RankResult(b.lo, b.hi, ev.take_trace());
}

/// Rank of the monolith P_X(G, U) of a tree-extension node with
/// topologically perfect base.
inline Ordinal monolith_rank(const GroupExpr& e) {
    if (e.kind() != NodeKind::Ex)
        throw HypothesisError("monolith rank is defined for EX nodes only");
    const GroupExpr& child = e.child(0);
    if (!infer_attributes(child).topologically_perfect)
        throw HypothesisError("monolith rank requires a topologically perfect EX child");
    auto violations = well_formed(e);
    if (!violations.empty()) throw IllFormedError(std::move(violations));
    RankResult r = eval_rank(child);
    if (!r.exact()) throw HypothesisError("monolith rank requires an exact child rank");
    Ordinal beta = leading_exponent(r.value());
    return add(Ordinal::omega_power(successor(beta)), Ordinal::from_int(1));
}

/// Residual height of a compactly generated node with exact rank: rank - 1.
inline Ordinal residual_height(const GroupExpr& e) {
    if (!infer_attributes(e).compactly_generated)
        throw HypothesisError("residual height is exposed for compactly generated nodes only");
    RankResult r = eval_rank(e);
    if (!r.exact()) throw HypothesisError("residual height requires an exact rank");
    return predecessor(r.value());
}

// ---------------------------------------------------------------------------
// Builder: a group expression of any prescribed successor rank <= w^w + 1
// ---------------------------------------------------------------------------

namespace detail {
inline const char* kBuilderSeedName = "g";

inline std::uint64_t small_count(const BigInt& n, const char* what) {
    if (n > std::uint64_t(1) << 32)
        throw HypothesisError(std::string("builder target ") + what + " too large");
    return static_cast<std::uint64_t>(n);
}
} // namespace detail

/// Emit an expression whose evaluated rank equals `target`. Accepted targets:
/// successor ordinals 1 <= target < w^w, and exactly w^w + 1.
inline GroupExpr build_group(const Ordinal& target) {
    const Ordinal omega_omega_plus_one =
        successor(pow(Ordinal::omega(), Ordinal::omega()));
    if (target == omega_omega_plus_one)
        return GroupExpr::ldp_family(detail::kBuilderSeedName);
    if (target.is_zero()) throw HypothesisError("no group has rank 0");
    if (target > omega_omega_plus_one)
        throw HypothesisError("builder targets stop at w^w + 1");
    if (!target.is_successor())
        throw HypothesisError("only successor targets (or exactly w^w + 1) are buildable");

    // target = sum_i w^i * a_i + f with f >= 1; all exponents are finite here.
    BigInt f = target.finite_part();
    std::vector<std::pair<std::uint64_t, std::uint64_t>> layers; // (exponent i, coefficient a_i)
    for (const auto& t : target.terms()) {
        if (t.exponent().is_zero()) continue;
        if (!t.exponent().is_finite())
            throw HypothesisError("builder targets stop at w^w + 1");
        layers.emplace_back(detail::small_count(t.exponent().finite_part(), "exponent"),
                            detail::small_count(t.coeff, "coefficient"));
    }

    if (layers.empty())
        return GroupExpr::power(GroupExpr::seed(detail::kBuilderSeedName),
                                detail::small_count(f - 1, "finite part"));
    if (f == 1) return GroupExpr::residual(build_group(successor(target)));

    std::vector<GroupExpr> blocks;
    for (const auto& [i, a] : layers)
        blocks.push_back(GroupExpr::power(GroupExpr::fn(i, detail::kBuilderSeedName), a));
    if (f >= 3)
        blocks.push_back(GroupExpr::power(GroupExpr::fn(0, detail::kBuilderSeedName),
                                          detail::small_count(f - 2, "finite part")));
    GroupExpr expr = blocks.back();
    for (std::size_t j = blocks.size() - 1; j-- > 0;) expr = GroupExpr::wreath(blocks[j], expr);
    return expr;
}

} // namespace elemrank
