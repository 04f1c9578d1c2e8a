#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "elemrank/tree.hpp"

namespace elemrank {

/// Deterministic sampler of finite-support automorphisms for randomized
/// identity checks. Same seed, same stream.
class TreeSampler {
public:
    TreeSampler(int branching, std::uint64_t seed) : branching_(branching), rng_(seed) {}

    std::uint64_t next(std::uint64_t bound) { return rng_() % bound; }

    TreeVertex random_vertex(long long level_lo = -4, long long level_hi = 4,
                             std::size_t max_word = 3) {
        long long level = level_lo + static_cast<long long>(next(level_hi - level_lo + 1));
        std::size_t len = next(max_word + 1);
        std::string word;
        for (std::size_t i = 0; i < len; ++i) {
            int lo = word.empty() ? 1 : 0; // canonical: first letter nonzero
            word += static_cast<char>('0' + lo + static_cast<int>(next(branching_ - lo)));
        }
        return TreeVertex{level, std::move(word)};
    }

    LocalPerm random_perm() {
        std::vector<std::uint8_t> img(branching_);
        for (int i = 0; i < branching_; ++i) img[i] = static_cast<std::uint8_t>(i);
        for (int i = branching_ - 1; i > 0; --i)
            std::swap(img[i], img[next(i + 1)]);
        return LocalPerm::from_images(std::move(img));
    }

    TreeAutomorphism random_element(std::size_t max_entries = 3, long long max_translation = 2) {
        long long n =
            -max_translation + static_cast<long long>(next(2 * max_translation + 1));
        std::map<TreeVertex, LocalPerm> sigma;
        std::size_t entries = next(max_entries + 1);
        for (std::size_t i = 0; i < entries; ++i) sigma[random_vertex()] = random_perm();
        return TreeAutomorphism(branching_, n, std::move(sigma));
    }

    int branching() const { return branching_; }

private:
    int branching_;
    std::mt19937_64 rng_;
};

struct SelftestCheck {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
};

namespace detail {

inline std::set<TreeVertex> support_closure(const TreeAutomorphism& g, const TreeAutomorphism& h,
                                            const TreeAutomorphism& gh) {
    std::set<TreeVertex> vs;
    TreeAutomorphism hinv = inverse(h);
    for (const auto& [v, perm] : h.support()) vs.insert(v);
    for (const auto& [v, perm] : gh.support()) vs.insert(v);
    for (const auto& [v, perm] : g.support()) {
        vs.insert(v);
        vs.insert(hinv.apply(v));
    }
    return vs;
}

} // namespace detail

/// Randomized identity checks for the simulator; returns per-check tallies.
inline std::vector<SelftestCheck> run_tree_selftest(int branching, std::uint64_t seed,
                                                    std::size_t cases) {
    TreeSampler sampler(branching, seed);
    std::vector<SelftestCheck> out;
    auto run = [&](const std::string& name, auto&& body) {
        SelftestCheck check{name, cases, 0};
        for (std::size_t i = 0; i < cases; ++i)
            if (!body()) ++check.failures;
        out.push_back(check);
    };

    run("cocycle", [&] {
        TreeAutomorphism g = sampler.random_element();
        TreeAutomorphism h = sampler.random_element();
        TreeAutomorphism gh = compose(g, h);
        std::set<TreeVertex> vs = detail::support_closure(g, h, gh);
        vs.insert(sampler.random_vertex());
        for (const auto& v : vs) {
            if (gh.local_action(v) != compose(g.local_action(h.apply(v)), h.local_action(v)))
                return false;
            if (gh.apply(v) != g.apply(h.apply(v))) return false;
        }
        return true;
    });

    run("associativity", [&] {
        TreeAutomorphism f = sampler.random_element();
        TreeAutomorphism g = sampler.random_element();
        TreeAutomorphism h = sampler.random_element();
        return compose(compose(f, g), h) == compose(f, compose(g, h));
    });

    run("inverse", [&] {
        TreeAutomorphism g = sampler.random_element();
        return compose(g, inverse(g)) == TreeAutomorphism::identity(branching)
               && compose(inverse(g), g) == TreeAutomorphism::identity(branching);
    });

    run("decompose-recompose", [&] {
        TreeAutomorphism g = sampler.random_element();
        auto [n, p] = decompose(g);
        if (p.translation_amount() != 0) return false;
        return compose(TreeAutomorphism::translation(branching, n), p) == g;
    });

    run("semidirect-law", [&] {
        TreeAutomorphism a = sampler.random_element();
        TreeAutomorphism b = sampler.random_element();
        auto [na, pa] = decompose(a);
        auto [nb, pb] = decompose(b);
        auto [nc, pc] = decompose(compose(a, b));
        return nc == na + nb && pc == compose(conj_by_t(pa, -nb), pb);
    });

    run("eta-equivariance", [&] {
        TreeAutomorphism g = sampler.random_element();
        TreeVertex v = sampler.random_vertex();
        return eta(g.apply(v)) == eta(v) + g.translation_amount();
    });

    run("translation-shift", [&] {
        TreeAutomorphism g = sampler.random_element();
        TreeVertex v = sampler.random_vertex();
        TreeAutomorphism t = TreeAutomorphism::translation(branching, 1);
        return conj_by_t(g, 1).apply(v) == compose(t, compose(g, inverse(t))).apply(v);
    });

    run("horoball-nesting", [&] {
        auto [n, p] = decompose(sampler.random_element());
        auto lvl = max_moved_level(p);
        long long cut = lvl ? *lvl : 0;
        for (long long k = cut; k <= cut + 3; ++k) {
            if (in_horoball_fixator(p, k) && !in_horoball_fixator(p, k + 1)) return false;
        }
        return in_horoball_fixator(p, cut + 1);
    });

    run("horoball-conjugation", [&] {
        auto [np, p] = decompose(sampler.random_element());
        auto [nq, q] = decompose(sampler.random_element());
        auto lvl = max_moved_level(q);
        long long n = lvl ? *lvl + 1 : 0;
        if (!in_horoball_fixator(q, n)) return false;
        return in_horoball_fixator(compose(p, compose(q, inverse(p))), n);
    });

    return out;
}

} // namespace elemrank
