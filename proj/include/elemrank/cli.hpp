#pragma once

#include <algorithm>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "elemrank/json_io.hpp"
#include "elemrank/parse.hpp"
#include "elemrank/rank.hpp"
#include "elemrank/selftest.hpp"
#include "elemrank/tree.hpp"
#include "elemrank/witness.hpp"

namespace elemrank {

namespace detail {

inline const char* ordering_name(Ordering o) {
    switch (o) {
    case Ordering::LT: return "LT";
    case Ordering::EQ: return "EQ";
    case Ordering::GT: return "GT";
    }
    return "EQ";
}

inline std::vector<TreeAutomorphism> load_generators(const std::string& path, int branching) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open generator file: " + path);
    std::vector<TreeAutomorphism> gens;
    std::string line;
    while (std::getline(in, line)) {
        auto nonspace = std::find_if(line.begin(), line.end(),
                                     [](unsigned char c) { return !std::isspace(c); });
        if (nonspace == line.end() || *nonspace == '#') continue;
        gens.push_back(parse_element(line, branching));
    }
    return gens;
}

} // namespace detail

/// Exit codes: 0 success, 1 parse error, 2 ill-formed expression or
/// hypothesis violation, 3 evaluation error.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"symbolic calculator for decomposition ranks of elementary groups"};
    app.require_subcommand(1);

    // ord
    auto* ord = app.add_subcommand("ord", "exact ordinal arithmetic");
    ord->require_subcommand(1);
    std::string ord_expr, ord_lhs, ord_rhs;
    bool ord_eval_json = false, ord_cmp_json = false;
    auto* ord_eval = ord->add_subcommand("eval", "evaluate an ordinal expression (+, *, ^)");
    ord_eval->add_option("expr", ord_expr, "ordinal expression")->required();
    ord_eval->add_flag("--json", ord_eval_json, "emit JSON");
    ord_eval->callback([&] {
        Ordinal v = parse_ordinal(ord_expr);
        if (ord_eval_json)
            out << Json{{"value", to_string(v)}}.dump() << "\n";
        else
            out << to_string(v) << "\n";
    });
    auto* ord_cmp = ord->add_subcommand("cmp", "compare two ordinals");
    ord_cmp->add_option("a", ord_lhs, "left ordinal")->required();
    ord_cmp->add_option("b", ord_rhs, "right ordinal")->required();
    ord_cmp->add_flag("--json", ord_cmp_json, "emit JSON");
    ord_cmp->callback([&] {
        const char* o = detail::ordering_name(compare(parse_ordinal(ord_lhs),
                                                      parse_ordinal(ord_rhs)));
        if (ord_cmp_json)
            out << Json{{"order", o}}.dump() << "\n";
        else
            out << o << "\n";
    });

    // rank
    auto* rank = app.add_subcommand("rank", "decomposition-rank evaluation and construction");
    rank->require_subcommand(1);
    std::string rank_expr, build_target;
    bool rank_trace = false, rank_json = false, build_verify = false, build_json = false;
    auto* rank_eval = rank->add_subcommand("eval", "evaluate the rank of a group expression");
    rank_eval->add_option("expr", rank_expr, "group expression")->required();
    rank_eval->add_flag("--trace", rank_trace, "print the derivation");
    rank_eval->add_flag("--json", rank_json, "emit JSON");
    rank_eval->callback([&] {
        RankResult r = eval_rank(parse_group_expr(rank_expr));
        if (rank_json) {
            out << rank_result_to_json(r).dump() << "\n";
            return;
        }
        out << r.value_string() << "\n";
        if (rank_trace)
            for (const auto& s : r.trace())
                out << "  " << s.rule << " -> " << s.value << "  [" << s.law << "]\n";
    });
    auto* rank_build = rank->add_subcommand("build", "emit an expression of the given rank");
    rank_build->add_option("target", build_target, "target ordinal")->required();
    rank_build->add_flag("--verify", build_verify, "re-evaluate and assert the fixpoint");
    rank_build->add_flag("--json", build_json, "emit JSON");
    rank_build->callback([&] {
        Ordinal target = parse_ordinal(build_target);
        GroupExpr e = build_group(target);
        bool verified = false;
        if (build_verify) {
            RankResult r = eval_rank(e);
            if (!r.exact() || r.value() != target)
                throw EvalError("builder fixpoint failed for " + to_string(target));
            verified = true;
        }
        if (build_json) {
            Json j{{"target", to_string(target)}, {"expression", print_group_expr(e)}};
            if (build_verify) j["verified"] = verified;
            out << j.dump() << "\n";
            return;
        }
        out << print_group_expr(e) << "\n";
        if (verified) out << "verified\n";
    });

    // chain
    std::string chain_expr;
    bool chain_json = false;
    auto* chain_cmd = app.add_subcommand("chain", "witnessing chain of a group expression");
    chain_cmd->add_option("expr", chain_expr, "group expression")->required();
    chain_cmd->add_flag("--json", chain_json, "emit JSON");
    chain_cmd->callback([&] {
        WitnessChain c = witness_chain(parse_group_expr(chain_expr));
        if (chain_json) {
            out << chain_to_json(c).dump() << "\n";
            return;
        }
        out << "order type: " << to_string(c.order_type()) << "\n";
        for (const auto& entry : c.entries())
            out << "  height " << to_string(entry.height) << ": "
                << print_group_expr(entry.group) << " -- " << entry.description << "\n";
    });

    // mono
    std::string mono_expr;
    bool mono_json = false;
    auto* mono_cmd = app.add_subcommand("mono", "monolith rank of a tree-extension node");
    mono_cmd->add_option("expr", mono_expr, "group expression")->required();
    mono_cmd->add_flag("--json", mono_json, "emit JSON");
    mono_cmd->callback([&] {
        Ordinal m = monolith_rank(parse_group_expr(mono_expr));
        if (mono_json)
            out << Json{{"monolith_rank", to_string(m)}}.dump() << "\n";
        else
            out << to_string(m) << "\n";
    });

    // tree
    auto* tree = app.add_subcommand("tree", "finite-support tree-automorphism simulator");
    tree->require_subcommand(1);

    int st_branching = 3;
    std::uint64_t st_seed = 42;
    std::size_t st_cases = 200;
    bool st_json = false;
    auto* selftest = tree->add_subcommand("selftest", "randomized identity checks");
    selftest->add_option("--branching", st_branching, "branching b (default 3)");
    selftest->add_option("--seed", st_seed, "random seed (default 42)");
    selftest->add_option("--cases", st_cases, "cases per check (default 200)");
    selftest->add_flag("--json", st_json, "emit JSON (default output is already JSON)");
    selftest->callback([&] {
        auto checks = run_tree_selftest(st_branching, st_seed, st_cases);
        Json j = Json::array();
        bool ok = true;
        for (const auto& c : checks) {
            j.push_back(Json{{"check", c.name}, {"cases", c.cases}, {"failures", c.failures}});
            ok = ok && c.failures == 0;
        }
        out << j.dump() << "\n";
        if (!ok) throw EvalError("tree selftest reported failures");
    });

    std::string apply_elem, apply_vertex;
    int apply_branching = 3;
    bool apply_json = false;
    auto* tree_apply = tree->add_subcommand("apply", "apply an element to a vertex");
    tree_apply->add_option("elem", apply_elem, "element text")->required();
    tree_apply->add_option("vertex", apply_vertex, "vertex text")->required();
    tree_apply->add_option("--branching", apply_branching, "branching b (default 3)");
    tree_apply->add_flag("--json", apply_json, "emit JSON");
    tree_apply->callback([&] {
        TreeAutomorphism g = parse_element(apply_elem, apply_branching);
        TreeVertex v = parse_vertex(apply_vertex);
        std::string image = print_vertex(g.apply(v));
        if (apply_json)
            out << Json{{"image", image}}.dump() << "\n";
        else
            out << image << "\n";
    });

    std::string orbit_file, orbit_start;
    int orbit_branching = 3;
    OrbitWindow window;
    bool orbit_json = false;
    auto* tree_orbit = tree->add_subcommand("orbit", "BFS orbit inside a window");
    tree_orbit->add_option("gens-file", orbit_file, "file with one element per line")->required();
    tree_orbit->add_option("vertex", orbit_start, "start vertex")->required();
    tree_orbit->add_option("--eta-min", window.eta_min, "lower eta bound")->required();
    tree_orbit->add_option("--eta-max", window.eta_max, "upper eta bound")->required();
    tree_orbit->add_option("--wmax", window.max_word, "maximum word length")->required();
    tree_orbit->add_option("--pad", window.pad, "exploration padding (default 2)");
    tree_orbit->add_option("--branching", orbit_branching, "branching b (default 3)");
    tree_orbit->add_flag("--json", orbit_json, "emit JSON (default output is already JSON)");
    tree_orbit->callback([&] {
        auto gens = detail::load_generators(orbit_file, orbit_branching);
        auto vs = orbit(gens, parse_vertex(orbit_start), window);
        out << vertices_to_json(vs).dump() << "\n";
    });

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 1;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const IllFormedError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const HypothesisError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidInputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const EvalError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace elemrank
