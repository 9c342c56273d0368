#pragma once

#include <random>
#include <string>
#include <vector>

#include "navalg/expr.hpp"
#include "navalg/graph.hpp"

// Deterministic random instances for property tests.

namespace testsupport {

using navalg::ExprPtr;
using navalg::Graph;

inline Graph random_graph(std::mt19937_64& rng, int max_nodes,
                          const std::vector<std::string>& labels,
                          double edge_prob = 0.3) {
    int n = 1 + static_cast<int>(rng() % max_nodes);
    std::vector<std::array<std::string, 3>> triples;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (const auto& l : labels)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (coin(rng) < edge_prob)
                    triples.push_back({l, "n" + std::to_string(a), "n" + std::to_string(b)});
    if (triples.empty())
        triples.push_back({labels[0], "n0", "n0"});
    // labels with no sampled edge stay in the vocabulary as empty relations
    return Graph::from_edges(triples, labels);
}

struct ExprGenConfig {
    navalg::OperatorProfile profile = navalg::OperatorProfile::all();
    std::vector<std::string> labels = {"R"};
    int max_size = 12;
};

inline ExprPtr random_expr(std::mt19937_64& rng, const ExprGenConfig& cfg, int budget) {
    using namespace navalg;
    const auto& p = cfg.profile;
    // choose among the atoms when the budget is spent
    if (budget <= 1) {
        switch (rng() % (p.di ? 4 : 3)) {
            case 0: return mk_label(cfg.labels[rng() % cfg.labels.size()]);
            case 1: return mk_id();
            case 2: return rng() % 4 ? mk_label(cfg.labels[rng() % cfg.labels.size()])
                                     : mk_empty();
            default: return mk_di();
        }
    }
    std::vector<int> choices; // 0 atom, 1 unary, 2 binary
    choices.push_back(0);
    if (budget >= 2) choices.push_back(1);
    if (budget >= 3) {
        choices.push_back(2);
        choices.push_back(2);
        choices.push_back(2);
    }
    int what = choices[rng() % choices.size()];
    if (what == 0) return random_expr(rng, cfg, 1);
    if (what == 1) {
        std::vector<char> ops;
        if (p.conv) ops.push_back('c');
        if (p.pi1) ops.push_back('1');
        if (p.pi2) ops.push_back('2');
        if (p.copi1) ops.push_back('3');
        if (p.copi2) ops.push_back('4');
        if (ops.empty()) return random_expr(rng, cfg, 1);
        ExprPtr arg = random_expr(rng, cfg, budget - 1);
        switch (ops[rng() % ops.size()]) {
            case 'c': return mk_converse(arg);
            case '1': return mk_proj1(arg);
            case '2': return mk_proj2(arg);
            case '3': return mk_coproj1(arg);
            default: return mk_coproj2(arg);
        }
    }
    std::vector<char> ops = {'.', '.', '|'};
    if (p.cap) ops.push_back('&');
    if (p.diff) ops.push_back('-');
    int left_budget = 1 + static_cast<int>(rng() % static_cast<unsigned>(budget - 2));
    ExprPtr l = random_expr(rng, cfg, left_budget);
    ExprPtr r = random_expr(rng, cfg, budget - 1 - left_budget);
    switch (ops[rng() % ops.size()]) {
        case '.': return mk_compose(l, r);
        case '|': return mk_union(l, r);
        case '&': return mk_intersect(l, r);
        default: return mk_diff(l, r);
    }
}

inline ExprPtr random_expr(std::mt19937_64& rng, const ExprGenConfig& cfg) {
    return random_expr(rng, cfg, cfg.max_size);
}

} // namespace testsupport
