#pragma once

#include <set>
#include <utility>

#include "navalg/evaluate.hpp"
#include "navalg/expr.hpp"
#include "navalg/graph.hpp"

namespace navalg {

// Independent evaluation oracle: plain std::set pair semantics written
// straight from the defining equations, with no bit matrices, no DAG
// sharing, and no reuse of the production evaluation path. Used only by
// tests to cross-check `evaluate`.

namespace detail {

using PairSet = std::set<std::pair<NodeId, NodeId>>;

inline PairSet reference_eval_rec(const ExprPtr& e, const Graph& g) {
    const int n = g.adom_size();
    PairSet out;
    switch (e->op) {
        case Op::Label: {
            for (auto p : g.edges(e->label)) out.insert(p);
            return out;
        }
        case Op::Empty:
            return out;
        case Op::Id: {
            for (int m = 0; m < n; ++m) out.insert({m, m});
            return out;
        }
        case Op::Di: {
            for (int m = 0; m < n; ++m)
                for (int k = 0; k < n; ++k)
                    if (m != k) out.insert({m, k});
            return out;
        }
        case Op::Compose: {
            PairSet l = reference_eval_rec(e->lhs, g);
            PairSet r = reference_eval_rec(e->rhs, g);
            for (auto [a, p] : l)
                for (auto [q, b] : r)
                    if (p == q) out.insert({a, b});
            return out;
        }
        case Op::Union: {
            out = reference_eval_rec(e->lhs, g);
            for (auto p : reference_eval_rec(e->rhs, g)) out.insert(p);
            return out;
        }
        case Op::Intersect: {
            PairSet l = reference_eval_rec(e->lhs, g);
            PairSet r = reference_eval_rec(e->rhs, g);
            for (auto p : l)
                if (r.count(p)) out.insert(p);
            return out;
        }
        case Op::Diff: {
            PairSet l = reference_eval_rec(e->lhs, g);
            PairSet r = reference_eval_rec(e->rhs, g);
            for (auto p : l)
                if (!r.count(p)) out.insert(p);
            return out;
        }
        case Op::Converse: {
            for (auto [a, b] : reference_eval_rec(e->lhs, g)) out.insert({b, a});
            return out;
        }
        case Op::Proj1: {
            PairSet s = reference_eval_rec(e->lhs, g);
            for (int m = 0; m < n; ++m) {
                bool found = false;
                for (int k = 0; k < n && !found; ++k)
                    if (s.count({m, k})) found = true;
                if (found) out.insert({m, m});
            }
            return out;
        }
        case Op::Proj2: {
            PairSet s = reference_eval_rec(e->lhs, g);
            for (int m = 0; m < n; ++m) {
                bool found = false;
                for (int k = 0; k < n && !found; ++k)
                    if (s.count({k, m})) found = true;
                if (found) out.insert({m, m});
            }
            return out;
        }
        case Op::Coproj1: {
            PairSet s = reference_eval_rec(e->lhs, g);
            for (int m = 0; m < n; ++m) {
                bool found = false;
                for (int k = 0; k < n && !found; ++k)
                    if (s.count({m, k})) found = true;
                if (!found) out.insert({m, m});
            }
            return out;
        }
        case Op::Coproj2: {
            PairSet s = reference_eval_rec(e->lhs, g);
            for (int m = 0; m < n; ++m) {
                bool found = false;
                for (int k = 0; k < n && !found; ++k)
                    if (s.count({k, m})) found = true;
                if (!found) out.insert({m, m});
            }
            return out;
        }
    }
    return out;
}

} // namespace detail

/// Same contract as `evaluate`, computed by naive nested-loop set
/// comprehension. Test oracle only.
inline BinaryRelation reference_evaluate(const ExprPtr& e, const Graph& g,
                                         const EvalConfig& config = {}) {
    std::set<std::string> vocab;
    if (config.vocabulary) {
        vocab = *config.vocabulary;
    } else {
        for (const auto& l : g.labels()) vocab.insert(l);
    }
    detail::check_expr(e, config.profile, vocab);
    detail::PairSet s = detail::reference_eval_rec(e, g);
    BinaryRelation r(g.adom_size());
    for (auto [a, b] : s) r.set(a, b);
    return r;
}

} // namespace navalg
