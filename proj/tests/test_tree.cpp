#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "elemrank/selftest.hpp"
#include "elemrank/tree.hpp"

using namespace elemrank;

namespace {

constexpr int kB = 3;

TreeVertex vx(long long level, const char* word = "") { return TreeVertex{level, word}; }

LocalPerm perm(std::initializer_list<int> images) {
    std::vector<std::uint8_t> v;
    for (int x : images) v.push_back(static_cast<std::uint8_t>(x));
    return LocalPerm::from_images(std::move(v));
}

TreeAutomorphism t(long long n = 1) { return TreeAutomorphism::translation(kB, n); }

std::vector<LocalPerm> sym3_gens() { return {perm({1, 0, 2}), perm({1, 2, 0})}; }

std::vector<LocalPerm> sym3() {
    auto gens = sym3_gens();
    std::vector<LocalPerm> all{LocalPerm::identity(kB)};
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t i = 0; i < all.size(); ++i)
            for (const auto& g : gens) {
                LocalPerm next = compose(g, all[i]);
                if (std::find(all.begin(), all.end(), next) == all.end()) {
                    all.push_back(next);
                    grew = true;
                }
            }
    }
    return all;
}

} // namespace

TEST_CASE("vertex navigation") {
    CHECK(eta(vx(0)) == 0);
    CHECK(in_neighbor(vx(0), 0, kB) == vx(-1));
    CHECK(in_neighbor(vx(0), 2, kB) == vx(0, "2"));
    CHECK(in_neighbor(vx(0, "1"), 0, kB) == vx(0, "10"));
    CHECK(eta(vx(2, "12")) == 0);
    CHECK(color_of(vx(0)) == 0);
    CHECK(color_of(vx(0, "12")) == 2);
    CHECK_THROWS_AS(in_neighbor(vx(0), 3, kB), InvalidInputError);

    TreeSampler sampler(kB, 1);
    for (int i = 0; i < 300; ++i) {
        TreeVertex v = sampler.random_vertex();
        REQUIRE(is_canonical(v));
        for (int c = 0; c < kB; ++c) {
            TreeVertex inn = in_neighbor(v, c, kB);
            CHECK(is_canonical(inn));
            CHECK(color_of(inn) == c);
            CHECK(out_neighbor(inn) == v);
            CHECK(eta(inn) == eta(v) - 1);
        }
        CHECK(eta(out_neighbor(v)) == eta(v) + 1);
    }
}

TEST_CASE("applying elements to vertices") {
    CHECK(t().apply(vx(0)) == vx(1));
    CHECK(TreeAutomorphism::identity(kB).apply(vx(-2, "21")) == vx(-2, "21"));
    // single swap (0 1) at the line vertex v0: the entry colored 1 goes to
    // color 0, which is the line child
    TreeAutomorphism g = TreeAutomorphism::single(kB, vx(0), perm({1, 0, 2}));
    CHECK(g.apply(vx(0, "1")) == vx(-1));
    CHECK(g.apply(vx(-1)) == vx(0, "1"));
    CHECK(g.apply(vx(0, "2")) == vx(0, "2"));
    CHECK(g.apply(vx(0)) == vx(0));
    CHECK(g.apply(vx(5)) == vx(5));
    // the swap relocates whole subtrees
    CHECK(g.apply(vx(0, "12")) == vx(-1, "2"));
}

TEST_CASE("composition against the pointwise oracle") {
    TreeSampler sampler(kB, 77);
    for (int i = 0; i < 500; ++i) {
        TreeAutomorphism g = sampler.random_element();
        TreeAutomorphism h = sampler.random_element();
        TreeAutomorphism gh = compose(g, h);
        TreeVertex v = sampler.random_vertex(-6, 6, 4);
        CHECK(gh.apply(v) == g.apply(h.apply(v)));
    }
}

TEST_CASE("group structure") {
    TreeSampler sampler(kB, 3);
    CHECK(compose(t(), t()) == t(2));
    for (int i = 0; i < 200; ++i) {
        TreeAutomorphism g = sampler.random_element();
        CHECK(compose(g, inverse(g)) == TreeAutomorphism::identity(kB));
        CHECK(compose(inverse(g), g) == TreeAutomorphism::identity(kB));
    }
}

TEST_CASE("local actions obey the cocycle identity") {
    TreeSampler sampler(kB, 99);
    CHECK(t().local_action(vx(2, "1")).is_identity());
    CHECK(TreeAutomorphism::identity(kB).local_action(vx(-1, "22")).is_identity());
    for (int i = 0; i < 300; ++i) {
        TreeAutomorphism g = sampler.random_element();
        TreeAutomorphism h = sampler.random_element();
        TreeAutomorphism gh = compose(g, h);
        std::set<TreeVertex> vs;
        for (const auto& [v, p] : g.support()) vs.insert(inverse(h).apply(v));
        for (const auto& [v, p] : h.support()) vs.insert(v);
        for (const auto& [v, p] : gh.support()) vs.insert(v);
        vs.insert(sampler.random_vertex());
        for (const auto& v : vs)
            CHECK(gh.local_action(v)
                  == compose(g.local_action(h.apply(v)), h.local_action(v)));
    }
}

TEST_CASE("singularity sets") {
    std::vector<LocalPerm> stab0{LocalPerm::identity(kB), perm({0, 2, 1})};
    CHECK(singularities(t(5), stab0).empty());
    TreeAutomorphism g = TreeAutomorphism::single(kB, vx(0), perm({1, 0, 2}));
    CHECK(singularities(g, stab0) == std::set<TreeVertex>{vx(0)});
    TreeAutomorphism inside = TreeAutomorphism::single(kB, vx(2, "1"), perm({0, 2, 1}));
    CHECK(singularities(inside, stab0).empty());
    CHECK(singularities(g, sym3()).empty());
    std::vector<LocalPerm> not_a_group{LocalPerm::identity(kB), perm({1, 2, 0})};
    CHECK_THROWS_AS(singularities(g, not_a_group), InvalidInputError);
}

TEST_CASE("semidirect decomposition") {
    auto [n2, p2] = decompose(t(2));
    CHECK(n2 == 2);
    CHECK(p2 == TreeAutomorphism::identity(kB));
    TreeAutomorphism p = TreeAutomorphism::single(kB, vx(1, "2"), perm({2, 1, 0}));
    auto [n0, p0] = decompose(p);
    CHECK(n0 == 0);
    CHECK(p0 == p);
    TreeSampler sampler(kB, 11);
    for (int i = 0; i < 200; ++i) {
        TreeAutomorphism g = sampler.random_element();
        auto [n, q] = decompose(g);
        CHECK(compose(TreeAutomorphism::translation(kB, n), q) == g);
    }
}

TEST_CASE("conjugation by t shifts levels") {
    TreeSampler sampler(kB, 13);
    for (int i = 0; i < 200; ++i) {
        TreeAutomorphism g = sampler.random_element();
        TreeVertex v = sampler.random_vertex();
        CHECK(conj_by_t(g, 1).apply(v) == compose(t(), compose(g, t(-1))).apply(v));
        CHECK(conj_by_t(conj_by_t(g, 3), -3) == g);
    }
}

TEST_CASE("geodesic routing") {
    auto gens = sym3_gens();
    CHECK(gamma_for_geodesic(vx(0), vx(0), gens, kB) == TreeAutomorphism::identity(kB));
    TreeAutomorphism g1 = gamma_for_geodesic(vx(0, "1"), vx(0), gens, kB);
    CHECK(g1.apply(vx(0, "1")) == vx(0));
    TreeAutomorphism g3 = gamma_for_geodesic(vx(1, "212"), vx(1), gens, kB);
    CHECK(g3.apply(vx(1, "212")) == vx(1));
    CHECK_THROWS_AS(gamma_for_geodesic(vx(0, "1"), vx(-1), gens, kB), HypothesisError);
    CHECK_THROWS_AS(gamma_for_geodesic(vx(0), vx(1, "2"), gens, kB), HypothesisError);
    std::vector<LocalPerm> not_transitive{perm({0, 2, 1})};
    CHECK_THROWS_AS(gamma_for_geodesic(vx(0, "1"), vx(0), not_transitive, kB), HypothesisError);
    // the constructor self-checks; spot-check the support confinement here
    TreeSampler sampler(kB, 21);
    for (int i = 0; i < 100; ++i) {
        long long level = static_cast<long long>(sampler.next(4)) - 1;
        TreeVertex v = vx(level);
        TreeVertex w = v;
        std::vector<TreeVertex> path{w};
        std::size_t depth = sampler.next(5);
        for (std::size_t d = 0; d < depth; ++d) {
            w = in_neighbor(w, static_cast<int>(sampler.next(kB)), kB);
            path.push_back(w);
        }
        std::reverse(path.begin(), path.end());
        TreeAutomorphism gamma = gamma_for_geodesic(w, v, gens, kB);
        CHECK(gamma.apply(w) == v);
        for (const auto& [u, p] : gamma.support())
            CHECK(std::find(path.begin() + 1, path.end(), u) != path.end());
    }
}

TEST_CASE("orbits") {
    OrbitWindow window{-2, 2, 2, 2};
    // the translation alone walks the line
    std::set<TreeVertex> line = orbit({t()}, vx(0), window);
    CHECK(line == std::set<TreeVertex>{vx(-2), vx(-1), vx(0), vx(1), vx(2)});
    // the identity goes nowhere
    std::set<TreeVertex> still = orbit({TreeAutomorphism::identity(kB)}, vx(0), window);
    CHECK(still == std::set<TreeVertex>{vx(0)});
    CHECK_THROWS_AS(orbit({t()}, vx(0), OrbitWindow{2, -2, 1, 2}), InvalidInputError);
    CHECK_THROWS_AS(orbit({}, vx(0), window), InvalidInputError);

    // color permutations at v0 plus the translation reach every canonical
    // vertex of the window
    std::vector<TreeAutomorphism> gens{t()};
    for (const auto& s : sym3_gens()) gens.push_back(TreeAutomorphism::single(kB, vx(0), s));
    std::set<TreeVertex> reached = orbit(gens, vx(0), window);
    std::set<TreeVertex> expected;
    for (long long k = -6; k <= 6; ++k) {
        for (const std::string& word :
             {std::string(""), std::string("1"), std::string("2"), std::string("10"),
              std::string("11"), std::string("12"), std::string("20"), std::string("21"),
              std::string("22")}) {
            TreeVertex v{k, word};
            if (eta(v) >= -2 && eta(v) <= 2 && word.size() <= 2) expected.insert(v);
        }
    }
    CHECK(reached == expected);
}

TEST_CASE("horoball fixators") {
    TreeAutomorphism id = TreeAutomorphism::identity(kB);
    CHECK(!max_moved_level(id));
    for (long long n = -3; n <= 3; ++n) CHECK(in_horoball_fixator(id, n));

    TreeAutomorphism p = TreeAutomorphism::single(kB, vx(3, "2"), perm({1, 0, 2}));
    REQUIRE(max_moved_level(p));
    CHECK(*max_moved_level(p) == 1); // eta(3,"2") - 1
    CHECK(in_horoball_fixator(p, 2));
    CHECK_FALSE(in_horoball_fixator(p, 1));
    CHECK_THROWS_AS(max_moved_level(t()), HypothesisError);

    TreeSampler sampler(kB, 4242);
    for (int i = 0; i < 200; ++i) {
        auto [n, q] = decompose(sampler.random_element());
        auto lvl = max_moved_level(q);
        long long cut = lvl ? *lvl : -5;
        for (long long m = cut + 1; m <= cut + 4; ++m) CHECK(in_horoball_fixator(q, m));
        if (lvl) CHECK_FALSE(in_horoball_fixator(q, cut));
    }
}

TEST_CASE("eta equivariance") {
    TreeSampler sampler(kB, 5);
    for (int i = 0; i < 200; ++i) {
        TreeAutomorphism g = sampler.random_element();
        TreeVertex v = sampler.random_vertex();
        CHECK(eta(g.apply(v)) == eta(v) + g.translation_amount());
    }
}

TEST_CASE("wreath-power embedding") {
    // depth 1: a single local action at v0
    NestedPerm depth1{kB, 1, {{"", perm({1, 0, 2})}}};
    CHECK(embed_wreath(depth1) == TreeAutomorphism::single(kB, vx(0), perm({1, 0, 2})));

    TreeSampler sampler(kB, 31);
    auto random_nested = [&](int depth) {
        NestedPerm x{kB, depth, {}};
        std::vector<std::string> addresses{""};
        for (int len = 1; len < depth; ++len) {
            std::vector<std::string> next;
            for (const auto& base : addresses)
                if (static_cast<int>(base.size()) == len - 1)
                    for (int c = 0; c < kB; ++c)
                        next.push_back(base + static_cast<char>('0' + c));
            addresses.insert(addresses.end(), next.begin(), next.end());
        }
        for (const auto& addr : addresses)
            if (sampler.next(3) == 0) x.entries.emplace(addr, sampler.random_perm());
        return x;
    };

    for (int i = 0; i < 100; ++i) {
        NestedPerm x = random_nested(3);
        NestedPerm y = random_nested(3);
        CHECK(extract_wreath(embed_wreath(x), 3) == x);
        // homomorphism for the imprimitive product
        CHECK(embed_wreath(nested_compose(x, y))
              == compose(embed_wreath(x), embed_wreath(y)));
        // pointwise action comparison on X^m identified with inn^m(v0)
        TreeAutomorphism gx = embed_wreath(x);
        std::string addr;
        for (int d = 0; d < 3; ++d) addr += static_cast<char>('0' + sampler.next(kB));
        TreeVertex v = vx(0);
        for (char c : addr) v = in_neighbor(v, c - '0', kB);
        TreeVertex image = vx(0);
        for (char c : x.act(addr)) image = in_neighbor(image, c - '0', kB);
        CHECK(gx.apply(v) == image);
    }

    // support outside the allowed region
    TreeAutomorphism deep = TreeAutomorphism::single(kB, vx(0, "111"), perm({1, 0, 2}));
    CHECK_THROWS_AS(extract_wreath(deep, 3), InvalidInputError);
    CHECK_THROWS_AS(extract_wreath(t(), 3), InvalidInputError);
    TreeAutomorphism above = TreeAutomorphism::single(kB, vx(1), perm({1, 0, 2}));
    CHECK_THROWS_AS(extract_wreath(above, 3), InvalidInputError);
}

TEST_CASE("element text round trip") {
    TreeSampler sampler(kB, 71);
    for (int i = 0; i < 200; ++i) {
        TreeAutomorphism g = sampler.random_element();
        CHECK(parse_element(print_element(g), kB) == g);
    }
    TreeAutomorphism parsed = parse_element("t^-2 ; { (0,\"\"): (1 0 2), (-1,\"2\"): (0 2 1) }");
    CHECK(parsed.translation_amount() == -2);
    CHECK(parsed.local_action(vx(0)) == perm({1, 0, 2}));
    CHECK(parsed.local_action(vx(-1, "2")) == perm({0, 2, 1}));
    CHECK(parse_vertex("(-3,\"12\")") == vx(-3, "12"));
    CHECK_THROWS_AS(parse_vertex("(0,\"02\")"), InvalidInputError);
    CHECK_THROWS_AS(parse_element("t^1 { }"), ParseError);
}

TEST_CASE("selftest harness is green and deterministic") {
    auto checks = run_tree_selftest(3, 42, 60);
    REQUIRE_FALSE(checks.empty());
    for (const auto& c : checks) {
        INFO(c.name);
        CHECK(c.cases == 60);
        CHECK(c.failures == 0);
    }
    auto again = run_tree_selftest(3, 42, 60);
    REQUIRE(again.size() == checks.size());
    for (std::size_t i = 0; i < checks.size(); ++i) CHECK(again[i].name == checks[i].name);
    // a different branching also passes
    for (const auto& c : run_tree_selftest(4, 7, 40)) {
        INFO(c.name);
        CHECK(c.failures == 0);
    }
}
