// navalg — workbench for the navigational query algebra on
// edge-labeled graphs: evaluation, rewriting, brute-force
// distinguishability, bisimulation checks, expressiveness diagrams, and
// the separation battery.
//
// Exit codes: 0 success/true, 1 false/empty, 2 usage error,
// 3 budget exceeded, 4 fixture validation failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "navalg/cq.hpp"
#include "navalg/evaluate.hpp"
#include "navalg/expr.hpp"
#include "navalg/fixtures.hpp"
#include "navalg/graph.hpp"
#include "navalg/lattice.hpp"
#include "navalg/rewrite.hpp"
#include "navalg/separation.hpp"

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitFixture = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

navalg::Graph load_graph_file(const std::string& path) {
    return navalg::load_graph(read_file(path));
}

void print_relation(const navalg::BinaryRelation& rel, const navalg::Graph& g) {
    std::vector<std::pair<std::string, std::string>> rows;
    for (auto [a, b] : rel.pairs()) rows.push_back({g.node_name(a), g.node_name(b)});
    std::sort(rows.begin(), rows.end());
    for (const auto& [s, d] : rows) std::cout << s << " " << d << "\n";
}

int run_eval(const std::string& graph_path, const std::string& expr_text,
             bool boolean_mode) {
    navalg::Graph g = load_graph_file(graph_path);
    navalg::ExprPtr e = navalg::parse_expr(expr_text);
    navalg::BinaryRelation rel = navalg::evaluate(e, g);
    if (boolean_mode) return rel.is_empty() ? kExitFalse : kExitTrue;
    print_relation(rel, g);
    return kExitTrue;
}

int run_rewrite(const std::string& expr_text, const std::string& target_text,
                const std::string& mode) {
    navalg::ExprPtr e = navalg::parse_expr(expr_text);
    navalg::RewriteTarget t;
    t.target = navalg::parse_features(target_text);
    t.mode = mode == "bool" ? navalg::RewriteTarget::Mode::BooleanEquivalent
                            : navalg::RewriteTarget::Mode::PathEquivalent;
    try {
        std::cout << navalg::render_expr(navalg::rewrite_expr(e, t)) << "\n";
    } catch (const navalg::UnreachableTargetError& ex) {
        std::cerr << "unreachable target: " << ex.what() << "\n";
        return kExitUsage;
    }
    return kExitTrue;
}

int run_distinguish(const std::string& g1_path, const std::string& g2_path,
                    const std::string& features, bool with_witness,
                    std::uint64_t budget) {
    navalg::Graph g1 = load_graph_file(g1_path);
    navalg::Graph g2 = load_graph_file(g2_path);
    navalg::OperatorProfile profile = navalg::parse_profile(features);
    try {
        auto verdict = navalg::distinguishable(g1, g2, profile, budget);
        if (verdict.distinguishable) {
            std::cout << "distinguishable\n";
            if (with_witness && verdict.witness)
                std::cout << "witness: " << navalg::render_expr(*verdict.witness)
                          << "\n";
            return kExitTrue;
        }
        std::cout << "indistinguishable\n";
        return kExitFalse;
    } catch (const navalg::BudgetExceededError& ex) {
        std::cerr << ex.what() << "\n";
        return kExitBudget;
    }
}

int run_bisim(const std::string& g1_path, const std::string& g2_path, int depth,
              bool print_relation_flag) {
    navalg::Graph g1 = load_graph_file(g1_path);
    navalg::Graph g2 = load_graph_file(g2_path);
    navalg::BisimRelation rel = depth < 0 ? navalg::bisim_fixpoint(g1, g2)
                                          : navalg::bisim_at_depth(g1, g2, depth);
    bool condition = true;
    for (int a1 = 0; a1 < rel.n1 && condition; ++a1)
        for (int b1 = 0; b1 < rel.n1 && condition; ++b1)
            if (!rel.cell_nonempty(a1, b1)) condition = false;
    std::cout << (depth < 0 ? "fixpoint" : "depth " + std::to_string(depth))
              << " condition: " << (condition ? "holds" : "fails") << "\n";
    if (print_relation_flag) {
        for (int a1 = 0; a1 < rel.n1; ++a1)
            for (int b1 = 0; b1 < rel.n1; ++b1)
                for (int a2 = 0; a2 < rel.n2; ++a2)
                    for (int b2 = 0; b2 < rel.n2; ++b2)
                        if (rel.related(a1, b1, a2, b2))
                            std::cout << g1.node_name(a1) << " " << g1.node_name(b1)
                                      << " " << g2.node_name(a2) << " "
                                      << g2.node_name(b2) << "\n";
    }
    return condition ? kExitTrue : kExitFalse;
}

int run_hasse(const std::string& order_text, const std::string& format) {
    navalg::OrderKind order = order_text == "bool" ? navalg::OrderKind::Bool
                                                   : navalg::OrderKind::Path;
    navalg::HasseDiagram d = navalg::hasse(order);
    if (format == "json")
        std::cout << navalg::to_json(d).dump(2) << "\n";
    else
        std::cout << navalg::to_dot(d);
    return kExitTrue;
}

int run_cq(const std::string& hom_from, const std::string& hom_to,
           const std::string& endos_path) {
    if (!endos_path.empty()) {
        navalg::CQ q = navalg::parse_body(read_file(endos_path));
        auto endos = navalg::enumerate_endomorphisms(q);
        for (const auto& endo : endos) {
            for (std::size_t i = 0; i < endo.size(); ++i)
                std::cout << q.var_names[i] << "->" << q.var_names[endo[i]] << " ";
            std::cout << "\n";
        }
        std::cout << endos.size() << " endomorphism(s)\n";
        return kExitTrue;
    }
    navalg::CQ from = navalg::parse_body(read_file(hom_from));
    navalg::CQ to = navalg::parse_body(read_file(hom_to));
    auto hom = navalg::find_homomorphism(from, to);
    if (!hom) {
        std::cout << "none\n";
        return kExitFalse;
    }
    for (std::size_t i = 0; i < hom->size(); ++i)
        std::cout << from.var_names[i] << "->" << to.var_names[(*hom)[i]] << "\n";
    return kExitTrue;
}

int run_verify_zzz() {
    navalg::ZzzReport rep = navalg::verify_zzz();
    std::cout << "(i) query true on pattern (conv form):    "
              << (rep.q_true_via_eval ? "pass" : "FAIL") << "\n"
              << "(i) query true on pattern (pi form):      "
              << (rep.q_true_via_pi_form ? "pass" : "FAIL") << "\n"
              << "(i) query true on pattern (CQ matching):  "
              << (rep.q_true_via_match ? "pass" : "FAIL") << "\n"
              << "(ii) only the identity endomorphism:      "
              << (rep.rigid ? "pass" : "FAIL") << " (" << rep.endomorphism_count
              << " found)\n"
              << "(iii) bounded separation confirmation:    "
              << ((rep.chains_ok && rep.no_bounded_expression) ? "pass" : "FAIL")
              << " (" << rep.expressions_checked << " expressions, "
              << rep.nonempty_on_bzzz << " nonempty on pattern)\n";
    for (const auto& fail : rep.failures) std::cout << "failure: " << fail << "\n";
    return rep.ok() ? kExitTrue : kExitFixture;
}

int run_verify_separations(bool json, std::uint64_t pair_c_budget) {
    navalg::SeparationOptions opt;
    opt.pair_c_budget = pair_c_budget;
    navalg::SeparationReport rep = navalg::verify_separations(opt);
    if (json) {
        std::cout << navalg::to_json(rep).dump(2) << "\n";
    } else {
        for (const auto& c : rep.checks) {
            std::cout << (c.pass ? "pass" : "FAIL") << "  " << c.proposition << "  ["
                      << c.fixture << "]";
            if (!c.witness.empty()) std::cout << "  witness " << c.witness;
            std::cout << "  (" << c.millis << " ms)";
            if (!c.note.empty()) std::cout << "  -- " << c.note;
            std::cout << "\n";
        }
    }
    return rep.all_pass() ? kExitTrue : kExitFixture;
}

int run_fixtures(const std::string& action, const std::string& name) {
    std::vector<navalg::Fixture> all = navalg::builtin_fixtures();
    if (action == "list") {
        for (const auto& f : all)
            std::cout << f.name << "  [" << f.provenance << "]  " << f.description
                      << "\n";
        return kExitTrue;
    }
    for (const auto& f : all) {
        if (f.name != name) continue;
        for (std::size_t i = 0; i < f.graphs.size(); ++i) {
            if (f.graphs.size() > 1) std::cout << "# graph " << (i + 1) << "\n";
            std::cout << navalg::render_graph(f.graphs[i]);
        }
        return kExitTrue;
    }
    std::cerr << "unknown fixture: " << name << "\n";
    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"navigational query algebra workbench"};
    app.require_subcommand(1);

    std::string graph_path, g1_path, g2_path, expr_text, target_text;
    std::string mode = "path", features, order_text = "path", format = "dot";
    std::string endos_path, fixture_action, fixture_name;
    bool boolean_mode = false, with_witness = false, print_rel = false;
    bool json_report = false;
    int depth = -1;
    std::uint64_t budget = 5'000'000;
    std::uint64_t pair_c_budget = 5'000'000;

    auto* eval = app.add_subcommand("eval", "evaluate an expression on a graph");
    eval->add_option("--graph", graph_path)->required();
    eval->add_option("--expr", expr_text)->required();
    eval->add_flag("--boolean", boolean_mode, "exit 0/1 for nonempty/empty");

    auto* rewrite = app.add_subcommand("rewrite", "rewrite into a target fragment");
    rewrite->add_option("--expr", expr_text)->required();
    rewrite->add_option("--target", target_text, "feature list, e.g. \"pi,di\"")
        ->required();
    rewrite->add_option("--mode", mode)->check(CLI::IsMember({"path", "bool"}));

    auto* dist = app.add_subcommand("distinguish",
                                    "brute-force distinguishability of two graphs");
    dist->add_option("--g1", g1_path)->required();
    dist->add_option("--g2", g2_path)->required();
    dist->add_option("--features", features, "operator list, e.g. \"di,conv,cap\"");
    dist->add_flag("--witness", with_witness);
    dist->add_option("--budget", budget);

    auto* bisim = app.add_subcommand("bisim", "bisimulation condition between graphs");
    bisim->add_option("--g1", g1_path)->required();
    bisim->add_option("--g2", g2_path)->required();
    bisim->add_option("--depth", depth, "refinement depth; default fixpoint");
    bisim->add_flag("--print-relation", print_rel, "dump related quadruples");

    auto* hasse_cmd = app.add_subcommand("hasse", "expressiveness diagram");
    hasse_cmd->add_option("--order", order_text)->check(CLI::IsMember({"path", "bool"}));
    hasse_cmd->add_option("--format", format)->check(CLI::IsMember({"dot", "json"}));

    std::vector<std::string> hom_files;
    auto* cq = app.add_subcommand("cq", "homomorphism and endomorphism search");
    cq->add_option("--homomorphism", hom_files, "body files: <from> <to>")
        ->expected(2);
    cq->add_option("--endos", endos_path, "body file for endomorphism enumeration");

    app.add_subcommand("verify-zzz", "machine-check the zigzag separation argument");

    auto* vsep = app.add_subcommand("verify-separations", "run the separation battery");
    vsep->add_flag("--json", json_report);
    vsep->add_option("--pair-c-budget", pair_c_budget,
                     "pair budget for the PAIR-C brute-force run");

    auto* fx = app.add_subcommand("fixtures", "list or dump built-in fixtures");
    fx->add_option("action", fixture_action)->check(CLI::IsMember({"list", "dump"}));
    fx->add_option("name", fixture_name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (eval->parsed()) return run_eval(graph_path, expr_text, boolean_mode);
        if (rewrite->parsed()) return run_rewrite(expr_text, target_text, mode);
        if (dist->parsed())
            return run_distinguish(g1_path, g2_path, features, with_witness, budget);
        if (bisim->parsed()) return run_bisim(g1_path, g2_path, depth, print_rel);
        if (hasse_cmd->parsed()) return run_hasse(order_text, format);
        if (cq->parsed()) {
            if (!endos_path.empty()) return run_cq("", "", endos_path);
            if (hom_files.size() != 2) {
                std::cerr << "cq needs --homomorphism <from> <to>, or --endos <body>\n";
                return kExitUsage;
            }
            return run_cq(hom_files[0], hom_files[1], "");
        }
        if (app.get_subcommand("verify-zzz")->parsed()) return run_verify_zzz();
        if (vsep->parsed())
            return run_verify_separations(json_report, pair_c_budget);
        if (fx->parsed()) {
            if (fixture_action.empty()) {
                std::cerr << "fixtures needs an action: list | dump <name>\n";
                return kExitUsage;
            }
            if (fixture_action == "dump" && fixture_name.empty()) {
                std::cerr << "fixtures dump needs a name\n";
                return kExitUsage;
            }
            return run_fixtures(fixture_action, fixture_name);
        }
    } catch (const navalg::BudgetExceededError& ex) {
        std::cerr << ex.what() << "\n";
        return kExitBudget;
    } catch (const navalg::FixtureValidationError& ex) {
        std::cerr << ex.what() << "\n";
        return kExitFixture;
    } catch (const navalg::ParseError& ex) {
        std::cerr << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& ex) {
        std::cerr << ex.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
