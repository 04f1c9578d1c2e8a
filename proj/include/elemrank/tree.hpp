#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elemrank/errors.hpp"

namespace elemrank {

/// Canonical coordinate of a vertex of the colored directed tree: the level k
/// of the merge point on the monochromatic line plus a color word w leading
/// into the subtree, with w empty or w[0] != '0'. Depth below the line is
/// |w|, so eta(v) = k - |w|; the color of v is the last letter of w (0 on the
/// line itself).
struct TreeVertex {
    long long level = 0;
    std::string word; // digits '0'..'9'

    friend bool operator==(const TreeVertex&, const TreeVertex&) = default;
    friend auto operator<=>(const TreeVertex&, const TreeVertex&) = default;
};

inline bool is_canonical(const TreeVertex& v) {
    for (char c : v.word)
        if (c < '0' || c > '9') return false;
    return v.word.empty() || v.word[0] != '0';
}

inline long long eta(const TreeVertex& v) {
    return v.level - static_cast<long long>(v.word.size());
}

inline int color_of(const TreeVertex& v) { return v.word.empty() ? 0 : v.word.back() - '0'; }

inline TreeVertex in_neighbor(const TreeVertex& v, int color, int branching) {
    if (color < 0 || color >= branching) throw InvalidInputError("color out of range");
    if (v.word.empty()) {
        if (color == 0) return TreeVertex{v.level - 1, ""};
        return TreeVertex{v.level, std::string(1, static_cast<char>('0' + color))};
    }
    return TreeVertex{v.level, v.word + static_cast<char>('0' + color)};
}

inline TreeVertex out_neighbor(const TreeVertex& v) {
    if (v.word.empty()) return TreeVertex{v.level + 1, ""};
    return TreeVertex{v.level, v.word.substr(0, v.word.size() - 1)};
}

inline std::string print_vertex(const TreeVertex& v) {
    return "(" + std::to_string(v.level) + ",\"" + v.word + "\")";
}

// ---------------------------------------------------------------------------
// Local permutations
// ---------------------------------------------------------------------------

/// A permutation of the color set {0, ..., b-1}.
class LocalPerm {
public:
    LocalPerm() = default;

    static LocalPerm identity(int branching) {
        LocalPerm p;
        p.img_.resize(branching);
        for (int i = 0; i < branching; ++i) p.img_[i] = static_cast<std::uint8_t>(i);
        return p;
    }

    static LocalPerm from_images(std::vector<std::uint8_t> images) {
        std::vector<bool> seen(images.size(), false);
        for (auto x : images) {
            if (x >= images.size() || seen[x]) throw InvalidInputError("not a permutation");
            seen[x] = true;
        }
        LocalPerm p;
        p.img_ = std::move(images);
        return p;
    }

    int degree() const { return static_cast<int>(img_.size()); }

    int operator()(int x) const {
        if (x < 0 || x >= degree()) throw InvalidInputError("color out of range");
        return img_[x];
    }

    bool is_identity() const {
        for (int i = 0; i < degree(); ++i)
            if (img_[i] != i) return false;
        return true;
    }

    LocalPerm inverse() const {
        LocalPerm p;
        p.img_.resize(img_.size());
        for (int i = 0; i < degree(); ++i) p.img_[img_[i]] = static_cast<std::uint8_t>(i);
        return p;
    }

    /// (p after q)(x) = p(q(x)).
    friend LocalPerm compose(const LocalPerm& p, const LocalPerm& q) {
        if (p.degree() != q.degree()) throw InvalidInputError("mixed permutation degrees");
        LocalPerm r;
        r.img_.resize(p.img_.size());
        for (int i = 0; i < p.degree(); ++i) r.img_[i] = p.img_[q.img_[i]];
        return r;
    }

    friend bool operator==(const LocalPerm&, const LocalPerm&) = default;
    friend auto operator<=>(const LocalPerm&, const LocalPerm&) = default;

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < degree(); ++i) {
            if (i) s += " ";
            s += std::to_string(img_[i]);
        }
        return s + ")";
    }

private:
    std::vector<std::uint8_t> img_;
};

// ---------------------------------------------------------------------------
// Finitely supported automorphisms
// ---------------------------------------------------------------------------

/// An orientation-preserving automorphism t^n * p, where t is the translation
/// along the monochromatic line and p fixes every line vertex above its
/// support. p is stored as its finitely supported local-action map; identity
/// entries are never stored, so equality is structural.
class TreeAutomorphism {
public:
    explicit TreeAutomorphism(int branching, long long translation = 0,
                              std::map<TreeVertex, LocalPerm> sigma = {})
        : branching_(branching), translation_(translation) {
        if (branching < 2 || branching > 10)
            throw InvalidInputError("branching must be between 2 and 10");
        for (auto& [v, perm] : sigma) {
            if (!is_canonical(v)) throw InvalidInputError("non-canonical support vertex");
            if (perm.degree() != branching)
                throw InvalidInputError("local permutation degree does not match branching");
            if (!perm.is_identity()) sigma_.emplace(v, perm);
        }
    }

    static TreeAutomorphism identity(int branching) { return TreeAutomorphism(branching); }

    static TreeAutomorphism translation(int branching, long long n) {
        return TreeAutomorphism(branching, n);
    }

    static TreeAutomorphism single(int branching, const TreeVertex& at, const LocalPerm& perm) {
        std::map<TreeVertex, LocalPerm> sigma;
        sigma.emplace(at, perm);
        return TreeAutomorphism(branching, 0, std::move(sigma));
    }

    int branching() const { return branching_; }
    long long translation_amount() const { return translation_; }
    const std::map<TreeVertex, LocalPerm>& support() const { return sigma_; }
    bool is_identity() const { return translation_ == 0 && sigma_.empty(); }

    LocalPerm local_action(const TreeVertex& v) const {
        auto it = sigma_.find(v);
        return it == sigma_.end() ? LocalPerm::identity(branching_) : it->second;
    }

    /// Image of v: walk inward from an anchor line vertex fixed by the p-part,
    /// shuffling colors by the stored local actions, then shift by t^n.
    TreeVertex apply(const TreeVertex& v) const {
        long long anchor = v.level + 1;
        for (const auto& [s, perm] : sigma_) anchor = std::max(anchor, s.level + 1);
        TreeVertex orig{anchor, ""};
        TreeVertex img{anchor, ""};
        auto walk = [&](int color) {
            int mapped = local_action(orig)(color);
            orig = in_neighbor(orig, color, branching_);
            img = in_neighbor(img, mapped, branching_);
        };
        for (long long i = v.level; i < anchor; ++i) walk(0);
        for (char c : v.word) walk(c - '0');
        img.level += translation_;
        return img;
    }

    friend bool operator==(const TreeAutomorphism& a, const TreeAutomorphism& b) {
        return a.branching_ == b.branching_ && a.translation_ == b.translation_
               && a.sigma_ == b.sigma_;
    }

private:
    int branching_;
    long long translation_;
    std::map<TreeVertex, LocalPerm> sigma_;
};

inline TreeAutomorphism inverse(const TreeAutomorphism& g) {
    std::map<TreeVertex, LocalPerm> sigma;
    for (const auto& [v, perm] : g.support()) sigma.emplace(g.apply(v), perm.inverse());
    return TreeAutomorphism(g.branching(), -g.translation_amount(), std::move(sigma));
}

/// The automorphism acting as g after h; local actions obey the cocycle
/// sigma(g h, v) = sigma(g, h.v) sigma(h, v).
inline TreeAutomorphism compose(const TreeAutomorphism& g, const TreeAutomorphism& h) {
    if (g.branching() != h.branching()) throw InvalidInputError("mixed branching");
    TreeAutomorphism hinv = inverse(h);
    std::set<TreeVertex> candidates;
    for (const auto& [v, perm] : h.support()) candidates.insert(v);
    for (const auto& [v, perm] : g.support()) candidates.insert(hinv.apply(v));
    std::map<TreeVertex, LocalPerm> sigma;
    for (const auto& v : candidates) {
        LocalPerm perm = compose(g.local_action(h.apply(v)), h.local_action(v));
        if (!perm.is_identity()) sigma.emplace(v, perm);
    }
    return TreeAutomorphism(g.branching(), g.translation_amount() + h.translation_amount(),
                            std::move(sigma));
}

/// t^m g t^-m: every support vertex shifts m levels up the line.
inline TreeAutomorphism conj_by_t(const TreeAutomorphism& g, long long m) {
    std::map<TreeVertex, LocalPerm> sigma;
    for (const auto& [v, perm] : g.support())
        sigma.emplace(TreeVertex{v.level + m, v.word}, perm);
    return TreeAutomorphism(g.branching(), g.translation_amount(), std::move(sigma));
}

/// g = t^n * p with p translation-free; n is unique.
inline std::pair<long long, TreeAutomorphism> decompose(const TreeAutomorphism& g) {
    return {g.translation_amount(),
            TreeAutomorphism(g.branching(), 0, g.support())};
}

// ---------------------------------------------------------------------------
// Singularities and horoball fixators
// ---------------------------------------------------------------------------

namespace detail {
inline void check_subgroup(const std::vector<LocalPerm>& u) {
    if (u.empty()) throw InvalidInputError("U must contain the identity");
    auto contains = [&](const LocalPerm& p) {
        return std::find(u.begin(), u.end(), p) != u.end();
    };
    if (!contains(LocalPerm::identity(u.front().degree())))
        throw InvalidInputError("U must contain the identity");
    for (const auto& p : u) {
        if (!contains(p.inverse())) throw InvalidInputError("U is not closed under inverses");
        for (const auto& q : u)
            if (!contains(compose(p, q))) throw InvalidInputError("U is not closed under products");
    }
}
} // namespace detail

/// Vertices where the local action leaves U.
inline std::set<TreeVertex> singularities(const TreeAutomorphism& g,
                                          const std::vector<LocalPerm>& u) {
    detail::check_subgroup(u);
    std::set<TreeVertex> out;
    for (const auto& [v, perm] : g.support())
        if (std::find(u.begin(), u.end(), perm) == u.end()) out.insert(v);
    return out;
}

/// Largest eta at which the translation-free element p moves a vertex;
/// nullopt for the identity.
inline std::optional<long long> max_moved_level(const TreeAutomorphism& p) {
    if (p.translation_amount() != 0)
        throw HypothesisError("max moved level is defined for translation-free elements");
    std::optional<long long> best;
    for (const auto& [v, perm] : p.support()) {
        bool moves = false;
        for (int x = 0; x < p.branching(); ++x)
            if (perm(x) != x) moves = true;
        if (!moves) continue;
        long long lvl = eta(v) - 1;
        if (!best || lvl > *best) best = lvl;
    }
    return best;
}

/// Membership in H_n, the pointwise stabilizer of the horoball {eta >= n}.
inline bool in_horoball_fixator(const TreeAutomorphism& p, long long n) {
    auto lvl = max_moved_level(p);
    return !lvl || *lvl < n;
}

// ---------------------------------------------------------------------------
// Geodesic routing
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<LocalPerm> perm_closure(const std::vector<LocalPerm>& gens) {
    if (gens.empty()) throw InvalidInputError("empty generator set");
    std::vector<LocalPerm> closure{LocalPerm::identity(gens.front().degree())};
    std::deque<LocalPerm> queue(closure.begin(), closure.end());
    auto known = [&](const LocalPerm& p) {
        return std::find(closure.begin(), closure.end(), p) != closure.end();
    };
    while (!queue.empty()) {
        LocalPerm cur = queue.front();
        queue.pop_front();
        for (const auto& gen : gens) {
            for (const LocalPerm& next : {compose(gen, cur), compose(gen.inverse(), cur)}) {
                if (!known(next)) {
                    closure.push_back(next);
                    queue.push_back(next);
                }
            }
        }
    }
    return closure;
}

} // namespace detail

/// An element of <G, t> mapping w to the line vertex v along the directed
/// geodesic, acting trivially off the geodesic path; per-step: route the
/// current image onto the line with a color permutation at the fixed vertex,
/// then translate.
inline TreeAutomorphism gamma_for_geodesic(const TreeVertex& w, const TreeVertex& v,
                                           const std::vector<LocalPerm>& gens, int branching) {
    if (!v.word.empty()) throw HypothesisError("target vertex must lie on the monochromatic line");
    std::vector<TreeVertex> path{w};
    while (path.back() != v) {
        if (eta(path.back()) >= v.level && path.back() != v)
            throw HypothesisError("no directed geodesic from w to v");
        path.push_back(out_neighbor(path.back()));
    }
    std::vector<LocalPerm> closure = detail::perm_closure(gens);
    std::set<int> orbit{0};
    bool grew = true;
    while (grew) {
        grew = false;
        for (int x : std::set<int>(orbit))
            for (const auto& p : closure)
                if (orbit.insert(p(x)).second) grew = true;
    }
    if (static_cast<int>(orbit.size()) != branching)
        throw HypothesisError("generators are not transitive on the colors");

    TreeAutomorphism gamma = TreeAutomorphism::identity(branching);
    TreeAutomorphism t = TreeAutomorphism::translation(branching, 1);
    // Work down the path: gamma_i maps path[m-i] to v.
    for (std::size_t i = path.size() - 1; i-- > 0;) {
        TreeVertex image = gamma.apply(path[i]);
        int x = color_of(image);
        auto it = std::find_if(closure.begin(), closure.end(),
                               [&](const LocalPerm& p) { return p(x) == 0; });
        if (it == closure.end()) throw HypothesisError("generators cannot route color to the line");
        gamma = compose(t, compose(TreeAutomorphism::single(branching, v, *it), gamma));
    }
    if (gamma.apply(w) != v) throw EvalError("geodesic routing failed to land on v");
    for (const auto& [u, perm] : gamma.support()) {
        bool on_path = false;
        for (std::size_t i = 1; i < path.size(); ++i)
            if (u == path[i]) on_path = true;
        if (!on_path) throw EvalError("geodesic routing produced support off the path");
    }
    return gamma;
}

// ---------------------------------------------------------------------------
// Orbit enumeration
// ---------------------------------------------------------------------------

struct OrbitWindow {
    long long eta_min = 0;
    long long eta_max = 0;
    std::size_t max_word = 0;
    long long pad = 2;
};

inline std::set<TreeVertex> orbit(const std::vector<TreeAutomorphism>& generators,
                                  const TreeVertex& start, const OrbitWindow& window) {
    if (generators.empty()) throw InvalidInputError("empty generator list");
    if (window.eta_min > window.eta_max) throw InvalidInputError("empty window");
    auto in_padded = [&](const TreeVertex& v) {
        return eta(v) >= window.eta_min - window.pad && eta(v) <= window.eta_max + window.pad
               && v.word.size() <= window.max_word + static_cast<std::size_t>(window.pad);
    };
    auto in_window = [&](const TreeVertex& v) {
        return eta(v) >= window.eta_min && eta(v) <= window.eta_max
               && v.word.size() <= window.max_word;
    };
    std::vector<TreeAutomorphism> gens = generators;
    for (const auto& g : generators) gens.push_back(inverse(g));
    std::set<TreeVertex> visited{start};
    std::deque<TreeVertex> queue{start};
    while (!queue.empty()) {
        TreeVertex cur = queue.front();
        queue.pop_front();
        for (const auto& g : gens) {
            TreeVertex next = g.apply(cur);
            if (in_padded(next) && visited.insert(next).second) queue.push_back(next);
        }
    }
    std::set<TreeVertex> out;
    for (const auto& v : visited)
        if (in_window(v)) out.insert(v);
    return out;
}

// ---------------------------------------------------------------------------
// Wreath-power elements and the closed embedding below a line vertex
// ---------------------------------------------------------------------------

/// Portrait of an iterated-wreath element over X^m: a local permutation at
/// each address (a color word of length < m); unstored addresses act
/// trivially.
struct NestedPerm {
    int branching = 3;
    int depth = 1;
    std::map<std::string, LocalPerm> entries;

    /// Image of a partial or full address under the portrait action.
    std::string act(std::string_view addr) const {
        std::string out;
        std::string cur;
        for (char c : addr) {
            auto it = entries.find(cur);
            int mapped = it == entries.end() ? c - '0' : it->second(c - '0');
            out += static_cast<char>('0' + mapped);
            cur += c;
        }
        return out;
    }

    friend bool operator==(const NestedPerm& a, const NestedPerm& b) {
        if (a.branching != b.branching || a.depth != b.depth) return false;
        auto trimmed = [](const NestedPerm& p) {
            std::map<std::string, LocalPerm> t;
            for (const auto& [addr, perm] : p.entries)
                if (!perm.is_identity()) t.emplace(addr, perm);
            return t;
        };
        return trimmed(a) == trimmed(b);
    }
};

/// Imprimitive product: (a * b) acts as a after b.
inline NestedPerm nested_compose(const NestedPerm& a, const NestedPerm& b) {
    if (a.branching != b.branching || a.depth != b.depth)
        throw InvalidInputError("mismatched wreath depths");
    NestedPerm r{a.branching, a.depth, {}};
    std::vector<std::string> addresses{""};
    for (int len = 1; len < a.depth; ++len) {
        std::vector<std::string> next;
        for (const auto& base : addresses)
            if (static_cast<int>(base.size()) == len - 1)
                for (int c = 0; c < a.branching; ++c)
                    next.push_back(base + static_cast<char>('0' + c));
        addresses.insert(addresses.end(), next.begin(), next.end());
    }
    auto lookup = [](const NestedPerm& p, const std::string& addr) {
        auto it = p.entries.find(addr);
        return it == p.entries.end() ? LocalPerm::identity(p.branching) : it->second;
    };
    for (const auto& addr : addresses) {
        LocalPerm perm = compose(lookup(a, b.act(addr)), lookup(b, addr));
        if (!perm.is_identity()) r.entries.emplace(addr, perm);
    }
    return r;
}

namespace detail {
inline TreeVertex vertex_at_address(std::string_view addr, int branching) {
    TreeVertex v{0, ""};
    for (char c : addr) v = in_neighbor(v, c - '0', branching);
    return v;
}
} // namespace detail

/// Write each portrait entry at the corresponding vertex under the line
/// vertex (0, ""). A group homomorphism onto its image.
inline TreeAutomorphism embed_wreath(const NestedPerm& x) {
    std::map<TreeVertex, LocalPerm> sigma;
    for (const auto& [addr, perm] : x.entries) {
        if (static_cast<int>(addr.size()) >= x.depth)
            throw InvalidInputError("portrait address deeper than the declared depth");
        sigma.emplace(detail::vertex_at_address(addr, x.branching), perm);
    }
    return TreeAutomorphism(x.branching, 0, std::move(sigma));
}

/// Inverse of embed_wreath for translation-free elements supported at
/// addresses of word length <= m - 1 under (0, "").
inline NestedPerm extract_wreath(const TreeAutomorphism& g, int depth) {
    if (g.translation_amount() != 0)
        throw InvalidInputError("extraction needs a translation-free element");
    NestedPerm x{g.branching(), depth, {}};
    for (const auto& [v, perm] : g.support()) {
        long long steps = -eta(v);
        if (v.level > 0 || steps < 0 || steps >= depth)
            throw InvalidInputError("support outside the depth-" + std::to_string(depth)
                                    + " region under (0,\"\")");
        std::string addr(static_cast<std::size_t>(-v.level), '0');
        addr += v.word;
        x.entries.emplace(std::move(addr), perm);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Textual element format
// ---------------------------------------------------------------------------

inline std::string print_element(const TreeAutomorphism& g) {
    std::string s = "t^" + std::to_string(g.translation_amount()) + " ; { ";
    bool first = true;
    for (const auto& [v, perm] : g.support()) {
        if (!first) s += ", ";
        first = false;
        s += print_vertex(v) + ": " + perm.str();
    }
    return s + (first ? "}" : " }");
}

namespace detail {

class TreeTextCursor {
public:
    explicit TreeTextCursor(std::string_view text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }
    bool try_consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!try_consume(c)) fail(std::string("'") + c + "'");
    }
    [[noreturn]] void fail(const std::string& expected) {
        skip_ws();
        std::string found =
            pos_ >= text_.size() ? "end of input" : "'" + std::string(1, text_[pos_]) + "'";
        throw ParseError(pos_, expected, found);
    }
    long long integer() {
        skip_ws();
        bool neg = try_consume('-');
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("an integer");
        long long n = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            n = n * 10 + (text_[pos_++] - '0');
        return neg ? -n : n;
    }
    std::string quoted_word() {
        expect('"');
        std::string w;
        while (pos_ < text_.size() && text_[pos_] != '"') w += text_[pos_++];
        if (pos_ >= text_.size()) fail("closing '\"'");
        ++pos_;
        return w;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

inline TreeVertex parse_vertex_at(TreeTextCursor& cur) {
    cur.expect('(');
    long long level = cur.integer();
    cur.expect(',');
    std::string word = cur.quoted_word();
    cur.expect(')');
    TreeVertex v{level, std::move(word)};
    if (!is_canonical(v)) throw InvalidInputError("non-canonical vertex " + print_vertex(v));
    return v;
}

inline LocalPerm parse_perm_at(TreeTextCursor& cur) {
    cur.expect('(');
    std::vector<std::uint8_t> images;
    while (!cur.try_consume(')')) {
        images.push_back(static_cast<std::uint8_t>(cur.integer()));
        cur.try_consume(',');
    }
    return LocalPerm::from_images(std::move(images));
}

} // namespace detail

inline TreeVertex parse_vertex(std::string_view text) {
    detail::TreeTextCursor cur(text);
    TreeVertex v = detail::parse_vertex_at(cur);
    if (!cur.at_end()) cur.fail("end of input");
    return v;
}

/// Parse "t^<n> ; { (<k>,"<word>"): (<images>), ... }". The branching is
/// taken from the permutations, or from `default_branching` when the support
/// is empty.
inline TreeAutomorphism parse_element(std::string_view text, int default_branching = 3) {
    detail::TreeTextCursor cur(text);
    cur.expect('t');
    cur.expect('^');
    long long n = cur.integer();
    cur.expect(';');
    cur.expect('{');
    std::map<TreeVertex, LocalPerm> sigma;
    int branching = 0;
    while (!cur.try_consume('}')) {
        TreeVertex v = detail::parse_vertex_at(cur);
        cur.expect(':');
        LocalPerm perm = detail::parse_perm_at(cur);
        if (branching == 0)
            branching = perm.degree();
        else if (perm.degree() != branching)
            throw InvalidInputError("mixed permutation degrees in element text");
        sigma.emplace(std::move(v), std::move(perm));
        cur.try_consume(',');
    }
    if (!cur.at_end()) cur.fail("end of input");
    if (branching == 0) branching = default_branching;
    return TreeAutomorphism(branching, n, std::move(sigma));
}

} // namespace elemrank
