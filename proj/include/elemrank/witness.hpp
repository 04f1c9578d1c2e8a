#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "elemrank/errors.hpp"
#include "elemrank/group_expr.hpp"
#include "elemrank/ordinal.hpp"
#include "elemrank/rank.hpp"

namespace elemrank {

/// One member of a chain certifying a rank lower bound: a compactly generated
/// subgroup of the target, given by an evaluable expression isomorphic to it,
/// sitting at the stated residual height.
struct ChainEntry {
    Ordinal height; // always a successor
    GroupExpr group;
    std::string description;
};

/// An increasing chain of compactly generated subgroups witnessing the rank
/// of the target. Chains are usually infinite; this value carries the exact
/// order type together with a finite sample of entries (an initial segment of
/// finite heights plus the landmark entries at each limit stage and the top).
class WitnessChain {
public:
    WitnessChain() = default;
    WitnessChain(GroupExpr target, Ordinal order_type, std::vector<ChainEntry> entries)
        : target_(std::move(target)),
          order_type_(std::move(order_type)),
          entries_(std::move(entries)) {}

    const GroupExpr& target() const { return target_; }
    const Ordinal& order_type() const { return order_type_; }
    bool empty() const { return order_type_.is_zero(); }
    const std::vector<ChainEntry>& entries() const { return entries_; }

private:
    GroupExpr target_;
    Ordinal order_type_;
    std::vector<ChainEntry> entries_;
};

namespace detail {

inline Ordinal chain_height_of(const GroupExpr& e) {
    return predecessor(eval_rank(e).value());
}

/// Sampled chain of `e`, bottom entry included (a seed block at height 1),
/// top entry equal to `e` itself at height rank(e) - 1.
inline std::vector<ChainEntry> gen_chain(const GroupExpr& e, std::size_t prefix_len) {
    switch (e.kind()) {
    case NodeKind::Seed:
        return {ChainEntry{Ordinal::from_int(1), e, "seed block"}};
    case NodeKind::Wreath: {
        const GroupExpr& l = e.child(0);
        const GroupExpr& k = e.child(1);
        Ordinal yl = chain_height_of(l);
        std::vector<ChainEntry> out;
        for (auto& entry : gen_chain(l, prefix_len)) {
            entry.description = "coordinate copy: " + entry.description;
            out.push_back(std::move(entry));
        }
        for (auto& entry : gen_chain(k, prefix_len)) {
            out.push_back(ChainEntry{add(yl, entry.height),
                                     GroupExpr::wreath(l, entry.group),
                                     "restricted product stacked over: " + entry.description});
        }
        return out;
    }
    case NodeKind::Power:
        return gen_chain(
            GroupExpr::wreath(e.child(0), GroupExpr::power(e.child(0), e.count() - 1)),
            prefix_len);
    case NodeKind::Ex:
    case NodeKind::Fn: {
        GroupExpr inner = e.kind() == NodeKind::Ex
                              ? e.child(0)
                              : GroupExpr::fn(e.count() - 1, e.name());
        std::size_t m_max = std::max<std::size_t>(3, prefix_len);
        std::vector<ChainEntry> out;
        GroupExpr big = GroupExpr::power(inner, m_max);
        for (auto& entry : gen_chain(big, prefix_len)) {
            if (!entry.height.is_finite()) continue;
            if (entry.height.finite_part() > BigInt(prefix_len)) continue;
            out.push_back(std::move(entry));
        }
        for (std::size_t m = 1; m <= 3; ++m) {
            GroupExpr p = GroupExpr::power(inner, m);
            out.push_back(ChainEntry{chain_height_of(p), p,
                                     "iterated wreath power (" + std::to_string(m)
                                         + " copies) inside the fixed half-tree"});
        }
        Ordinal top = chain_height_of(e);
        std::string how = e.kind() == NodeKind::Fn
                              ? "the group itself (chain carried through the perfect hull and "
                                "the faithful quotient)"
                              : "the group itself";
        out.push_back(ChainEntry{top, e, how});
        return out;
    }
    default:
        throw HypothesisError("no chain construction for this node");
    }
}

} // namespace detail

/// Witnessing chain of a chain-capable expression with exact rank a + 2; the
/// emitted chain has order type a + 1. Seed atoms and Trivial yield the empty
/// chain.
inline WitnessChain witness_chain(const GroupExpr& e, std::size_t prefix_len = 6) {
    if (e.kind() == NodeKind::Trivial || e.kind() == NodeKind::Seed)
        return WitnessChain(e, Ordinal(), {});
    if (!infer_attributes(e).has_witnessing_chain)
        throw HypothesisError("no witnessing chain is available for this expression");
    RankResult r = eval_rank(e);
    if (!r.exact()) throw HypothesisError("witnessing chains require an exact rank");
    Ordinal order = predecessor(r.value());

    std::vector<ChainEntry> entries = detail::gen_chain(e, prefix_len);
    std::stable_sort(entries.begin(), entries.end(),
                     [](const ChainEntry& a, const ChainEntry& b) { return a.height < b.height; });
    std::vector<ChainEntry> dedup;
    for (auto& entry : entries) {
        if (!dedup.empty() && dedup.back().height == entry.height) continue;
        dedup.push_back(std::move(entry));
    }
    if (dedup.empty() || dedup.back().height != order)
        throw EvalError("chain construction did not reach the top height");
    return WitnessChain(e, std::move(order), std::move(dedup));
}

} // namespace elemrank
