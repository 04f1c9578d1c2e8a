#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "elemrank/errors.hpp"

namespace elemrank {

enum class NodeKind {
    Trivial,
    Profinite,
    Discrete,
    Seed,
    Prod,
    Ldp,
    LdpFamily,
    Ext,
    CocompactExt,
    Wreath,
    Power,
    Ex,
    Fn,
    Residual,
};

/// Immutable term over the group-construction constructors. Nodes are shared,
/// equality is structural. Pow(c, 0) is identified with Trivial, Pow(c, 1)
/// with c, and F(0, s) with Seed(s).
class GroupExpr {
public:
    GroupExpr() : node_(trivial_node()) {}

    static GroupExpr trivial() { return GroupExpr(trivial_node()); }

    static GroupExpr profinite(std::string name) {
        return make(NodeKind::Profinite, std::move(name));
    }

    static GroupExpr discrete(std::string name, bool finitely_generated = false,
                              bool topologically_perfect = false) {
        auto n = make(NodeKind::Discrete, std::move(name));
        n.mutable_node().flag_a = finitely_generated;
        n.mutable_node().flag_b = topologically_perfect;
        return n;
    }

    static GroupExpr seed(std::string name) { return make(NodeKind::Seed, std::move(name)); }

    static GroupExpr prod(std::vector<GroupExpr> children) {
        if (children.empty()) throw InvalidInputError("Prod needs at least one factor");
        auto n = make(NodeKind::Prod, "");
        n.mutable_node().children = std::move(children);
        return n;
    }

    static GroupExpr ldp(GroupExpr child, std::uint64_t copies) {
        if (copies == 0) throw InvalidInputError("LDP multiplicity must be >= 1");
        auto n = make(NodeKind::Ldp, "");
        n.mutable_node().children = {std::move(child)};
        n.mutable_node().count = copies;
        return n;
    }

    static GroupExpr ldp_infinite(GroupExpr child) {
        auto n = make(NodeKind::Ldp, "");
        n.mutable_node().children = {std::move(child)};
        n.mutable_node().flag_a = true; // countably infinite multiplicity
        return n;
    }

    static GroupExpr ldp_family(std::string seed_name) {
        return make(NodeKind::LdpFamily, std::move(seed_name));
    }

    static GroupExpr ext(GroupExpr normal, GroupExpr quotient) {
        auto n = make(NodeKind::Ext, "");
        n.mutable_node().children = {std::move(normal), std::move(quotient)};
        return n;
    }

    static GroupExpr cocompact_ext(GroupExpr normal) {
        auto n = make(NodeKind::CocompactExt, "");
        n.mutable_node().children = {std::move(normal)};
        return n;
    }

    static GroupExpr wreath(GroupExpr base, GroupExpr top) {
        auto n = make(NodeKind::Wreath, "");
        n.mutable_node().children = {std::move(base), std::move(top)};
        return n;
    }

    static GroupExpr power(GroupExpr child, std::uint64_t copies) {
        if (copies == 0) return trivial();
        if (copies == 1) return child;
        auto n = make(NodeKind::Power, "");
        n.mutable_node().children = {std::move(child)};
        n.mutable_node().count = copies;
        return n;
    }

    static GroupExpr ex(GroupExpr child) {
        auto n = make(NodeKind::Ex, "");
        n.mutable_node().children = {std::move(child)};
        return n;
    }

    static GroupExpr fn(std::uint64_t index, std::string seed_name) {
        if (index == 0) return seed(std::move(seed_name));
        auto n = make(NodeKind::Fn, std::move(seed_name));
        n.mutable_node().count = index;
        return n;
    }

    static GroupExpr residual(GroupExpr child) {
        auto n = make(NodeKind::Residual, "");
        n.mutable_node().children = {std::move(child)};
        return n;
    }

    NodeKind kind() const { return node_->kind; }
    const std::string& name() const { return node_->name; }
    const std::vector<GroupExpr>& children() const { return node_->children; }
    const GroupExpr& child(std::size_t i) const { return node_->children.at(i); }

    /// Power exponent, Fn index, or finite LDP multiplicity.
    std::uint64_t count() const { return node_->count; }

    bool ldp_is_infinite() const { return kind() == NodeKind::Ldp && node_->flag_a; }
    bool discrete_finitely_generated() const {
        return kind() == NodeKind::Discrete && node_->flag_a;
    }
    bool discrete_perfect() const { return kind() == NodeKind::Discrete && node_->flag_b; }

    friend bool operator==(const GroupExpr& a, const GroupExpr& b) {
        if (a.node_ == b.node_) return true;
        if (a.kind() != b.kind() || a.name() != b.name() || a.count() != b.count()
            || a.node_->flag_a != b.node_->flag_a || a.node_->flag_b != b.node_->flag_b
            || a.children().size() != b.children().size())
            return false;
        for (std::size_t i = 0; i < a.children().size(); ++i)
            if (!(a.children()[i] == b.children()[i])) return false;
        return true;
    }
    friend bool operator!=(const GroupExpr& a, const GroupExpr& b) { return !(a == b); }

private:
    struct Node {
        NodeKind kind = NodeKind::Trivial;
        std::string name;
        std::vector<GroupExpr> children;
        std::uint64_t count = 0;
        bool flag_a = false;
        bool flag_b = false;
    };

    explicit GroupExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static GroupExpr make(NodeKind k, std::string name) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->name = std::move(name);
        return GroupExpr(std::shared_ptr<const Node>(std::move(n)));
    }

    static const std::shared_ptr<const Node>& trivial_node() {
        static const std::shared_ptr<const Node> t = std::make_shared<Node>();
        return t;
    }

    // Only used by factories before the node is published.
    Node& mutable_node() { return const_cast<Node&>(*node_); }

    std::shared_ptr<const Node> node_;
};

/// Capability flags consumed by the rank rules. All compact open subgroups
/// and permutation domains are tracked abstractly through these predicates.
struct AttributeSet {
    bool nontrivial = false;
    bool compactly_generated = false;
    bool topologically_perfect = false;
    bool transitive_permutation = false;
    bool dense_u = false;
    bool has_witnessing_chain = false;
    bool monolithic = false;
};

/// Whether the node carries a designated permutation action at all
/// (transitive or not); wreath products need one on the acting factor.
inline bool carries_action(const GroupExpr& e) {
    switch (e.kind()) {
    case NodeKind::Seed:
    case NodeKind::Fn:
    case NodeKind::Ex:
        return true;
    case NodeKind::Wreath:
        return carries_action(e.child(0)) && carries_action(e.child(1));
    case NodeKind::Power:
        return carries_action(e.child(0));
    default:
        return false;
    }
}

namespace detail {

inline AttributeSet seed_grade_attrs() {
    AttributeSet a;
    a.nontrivial = true;
    a.compactly_generated = true;
    a.topologically_perfect = true;
    a.transitive_permutation = true;
    a.dense_u = true;
    a.has_witnessing_chain = true;
    return a;
}

inline AttributeSet wreath_attrs(const AttributeSet& l, const AttributeSet& k) {
    AttributeSet a;
    a.nontrivial = l.nontrivial || k.nontrivial;
    a.compactly_generated = l.compactly_generated && k.compactly_generated
                            && k.transitive_permutation;
    a.transitive_permutation = l.transitive_permutation && k.transitive_permutation;
    a.dense_u = l.dense_u && k.dense_u;
    a.topologically_perfect = l.topologically_perfect && k.topologically_perfect
                              && k.transitive_permutation;
    a.has_witnessing_chain = l.nontrivial && k.nontrivial && l.compactly_generated
                             && k.compactly_generated && l.dense_u && l.has_witnessing_chain
                             && k.has_witnessing_chain;
    return a;
}

} // namespace detail

/// Deterministic bottom-up flag propagation; total on all well-typed trees.
inline AttributeSet infer_attributes(const GroupExpr& e) {
    switch (e.kind()) {
    case NodeKind::Trivial:
        return AttributeSet{};
    case NodeKind::Profinite: {
        AttributeSet a;
        a.nontrivial = true;
        a.compactly_generated = true;
        return a;
    }
    case NodeKind::Discrete: {
        AttributeSet a;
        a.nontrivial = true;
        a.compactly_generated = e.discrete_finitely_generated();
        a.topologically_perfect = e.discrete_perfect();
        return a;
    }
    case NodeKind::Seed:
        return detail::seed_grade_attrs();
    case NodeKind::Prod: {
        AttributeSet a;
        a.compactly_generated = true;
        a.topologically_perfect = true;
        a.dense_u = true;
        for (const auto& c : e.children()) {
            AttributeSet ca = infer_attributes(c);
            a.nontrivial = a.nontrivial || ca.nontrivial;
            a.compactly_generated = a.compactly_generated && ca.compactly_generated;
            a.topologically_perfect = a.topologically_perfect && ca.topologically_perfect;
            a.dense_u = a.dense_u && ca.dense_u;
        }
        return a;
    }
    case NodeKind::Ldp: {
        AttributeSet ca = infer_attributes(e.child(0));
        AttributeSet a;
        a.nontrivial = ca.nontrivial;
        a.compactly_generated = !e.ldp_is_infinite() && ca.compactly_generated;
        a.topologically_perfect = ca.topologically_perfect;
        a.dense_u = ca.dense_u;
        return a;
    }
    case NodeKind::LdpFamily: {
        AttributeSet a;
        a.nontrivial = true;
        // A strictly increasing union of open subgroups: never compactly generated.
        a.topologically_perfect = true;
        a.dense_u = true;
        return a;
    }
    case NodeKind::Ext: {
        AttributeSet n = infer_attributes(e.child(0));
        AttributeSet q = infer_attributes(e.child(1));
        AttributeSet a;
        a.nontrivial = n.nontrivial || q.nontrivial;
        a.compactly_generated = n.compactly_generated && q.compactly_generated;
        a.topologically_perfect = n.topologically_perfect && q.topologically_perfect;
        return a;
    }
    case NodeKind::CocompactExt: {
        AttributeSet n = infer_attributes(e.child(0));
        AttributeSet a;
        a.nontrivial = n.nontrivial;
        a.compactly_generated = n.compactly_generated;
        return a;
    }
    case NodeKind::Wreath:
        return detail::wreath_attrs(infer_attributes(e.child(0)), infer_attributes(e.child(1)));
    case NodeKind::Power: {
        AttributeSet c = infer_attributes(e.child(0));
        AttributeSet acc = c;
        for (std::uint64_t i = 1; i < e.count(); ++i) acc = detail::wreath_attrs(c, acc);
        return acc;
    }
    case NodeKind::Ex: {
        AttributeSet c = infer_attributes(e.child(0));
        AttributeSet a;
        a.nontrivial = true; // contains the line translation
        a.compactly_generated = c.compactly_generated && c.transitive_permutation;
        a.transitive_permutation = c.transitive_permutation;
        a.monolithic = c.transitive_permutation && c.nontrivial;
        // The vertex-fixing subgroup is open, normal and proper, so no compact
        // open subgroup can have dense normal closure; likewise the infinite
        // cyclic quotient kills topological perfection.
        a.has_witnessing_chain = c.nontrivial && c.compactly_generated
                                 && c.transitive_permutation && c.dense_u
                                 && c.has_witnessing_chain;
        return a;
    }
    case NodeKind::Fn:
        return detail::seed_grade_attrs();
    case NodeKind::Residual:
        return AttributeSet{};
    }
    throw Error("unreachable node kind");
}

// ---------------------------------------------------------------------------
// Structural checks
// ---------------------------------------------------------------------------

namespace detail {

inline void collect_violations(const GroupExpr& e, const std::string& path,
                               std::vector<std::string>& out) {
    auto here = [&](const char* ctor) { return path.empty() ? std::string(ctor) : path; };
    switch (e.kind()) {
    case NodeKind::Ex: {
        AttributeSet c = infer_attributes(e.child(0));
        if (!c.nontrivial || !c.transitive_permutation)
            out.push_back(here("EX") + ": EX requires nontrivial transitive child");
        if (!c.compactly_generated)
            out.push_back(here("EX") + ": EX requires compactly generated child");
        if (!c.dense_u)
            out.push_back(here("EX")
                          + ": EX requires a compact open subgroup with dense normal closure");
        break;
    }
    case NodeKind::Residual: {
        AttributeSet c = infer_attributes(e.child(0));
        if (!c.compactly_generated)
            out.push_back(here("Res") + ": Res requires compactly generated child");
        break;
    }
    case NodeKind::Wreath: {
        if (!carries_action(e.child(1)))
            out.push_back(here("Wr")
                          + ": Wr requires its acting factor to carry a permutation action");
        break;
    }
    case NodeKind::CocompactExt: {
        AttributeSet c = infer_attributes(e.child(0));
        if (!c.nontrivial)
            out.push_back(here("CoExt") + ": CoExt requires a nontrivial normal subgroup");
        break;
    }
    default:
        break;
    }
    const char* label = "?";
    switch (e.kind()) {
    case NodeKind::Prod: label = "Prod"; break;
    case NodeKind::Ldp: label = "LDP"; break;
    case NodeKind::Ext: label = "Ext"; break;
    case NodeKind::CocompactExt: label = "CoExt"; break;
    case NodeKind::Wreath: label = "Wr"; break;
    case NodeKind::Power: label = "Pow"; break;
    case NodeKind::Ex: label = "EX"; break;
    case NodeKind::Residual: label = "Res"; break;
    default: label = ""; break;
    }
    for (std::size_t i = 0; i < e.children().size(); ++i) {
        std::string sub = std::string(label) + "." + std::to_string(i + 1);
        collect_violations(e.children()[i], path.empty() ? sub : path + "/" + sub, out);
    }
}

} // namespace detail

/// Structural checks; an empty result means the expression is evaluable.
inline std::vector<std::string> well_formed(const GroupExpr& e) {
    std::vector<std::string> out;
    detail::collect_violations(e, "", out);
    return out;
}

// ---------------------------------------------------------------------------
// Canonical printer (grammar in parse.hpp)
// ---------------------------------------------------------------------------

inline std::string print_group_expr(const GroupExpr& e) {
    switch (e.kind()) {
    case NodeKind::Trivial:
        return "Trivial";
    case NodeKind::Profinite:
        return "Profinite(" + e.name() + ")";
    case NodeKind::Discrete: {
        std::string s = "Discrete(" + e.name();
        if (e.discrete_finitely_generated()) s += ",fg";
        if (e.discrete_perfect()) s += ",perfect";
        return s + ")";
    }
    case NodeKind::Seed:
        return "Seed(" + e.name() + ")";
    case NodeKind::Prod: {
        std::string s = "Prod(";
        for (std::size_t i = 0; i < e.children().size(); ++i) {
            if (i) s += ",";
            s += print_group_expr(e.children()[i]);
        }
        return s + ")";
    }
    case NodeKind::Ldp:
        return "LDP(" + print_group_expr(e.child(0)) + ","
               + (e.ldp_is_infinite() ? "inf" : std::to_string(e.count())) + ")";
    case NodeKind::LdpFamily:
        return "LDPfam(" + e.name() + ")";
    case NodeKind::Ext:
        return "Ext(" + print_group_expr(e.child(0)) + "," + print_group_expr(e.child(1)) + ")";
    case NodeKind::CocompactExt:
        return "CoExt(" + print_group_expr(e.child(0)) + ")";
    case NodeKind::Wreath:
        return "Wr(" + print_group_expr(e.child(0)) + "," + print_group_expr(e.child(1)) + ")";
    case NodeKind::Power:
        return "Pow(" + print_group_expr(e.child(0)) + "," + std::to_string(e.count()) + ")";
    case NodeKind::Ex:
        return "EX(" + print_group_expr(e.child(0)) + ")";
    case NodeKind::Fn:
        return "F(" + std::to_string(e.count()) + "," + e.name() + ")";
    case NodeKind::Residual:
        return "Res(" + print_group_expr(e.child(0)) + ")";
    }
    throw Error("unreachable node kind");
}

} // namespace elemrank
