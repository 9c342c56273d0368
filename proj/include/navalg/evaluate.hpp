#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "navalg/expr.hpp"
#include "navalg/graph.hpp"

namespace navalg {

/// Which operators are legal and which labels may be mentioned. An
/// expression using anything outside the config is rejected before
/// evaluation starts. The default admits every operator and takes the
/// vocabulary from the graph.
struct EvalConfig {
    OperatorProfile profile = OperatorProfile::all();
    std::optional<std::set<std::string>> vocabulary;
};

namespace detail {

inline void check_expr(const ExprPtr& e, const OperatorProfile& p,
                       const std::set<std::string>& vocab) {
    switch (e->op) {
        case Op::Label:
            if (!vocab.count(e->label))
                throw EvalError("unknown label '" + e->label + "'");
            return;
        case Op::Di:
            if (!p.di) throw EvalError("operator 'di' is not in the profile");
            return;
        case Op::Converse:
            if (!p.conv) throw EvalError("operator 'conv' is not in the profile");
            break;
        case Op::Intersect:
            if (!p.cap) throw EvalError("operator '&' is not in the profile");
            break;
        case Op::Diff:
            if (!p.diff) throw EvalError("operator '-' is not in the profile");
            break;
        case Op::Proj1:
            if (!p.pi1) throw EvalError("operator 'pi1' is not in the profile");
            break;
        case Op::Proj2:
            if (!p.pi2) throw EvalError("operator 'pi2' is not in the profile");
            break;
        case Op::Coproj1:
            if (!p.copi1) throw EvalError("operator 'copi1' is not in the profile");
            break;
        case Op::Coproj2:
            if (!p.copi2) throw EvalError("operator 'copi2' is not in the profile");
            break;
        default:
            break;
    }
    if (e->lhs) check_expr(e->lhs, p, vocab);
    if (e->rhs) check_expr(e->rhs, p, vocab);
}

/// Collapses the tree into a DAG of structurally unique nodes so that
/// repeated subtrees are evaluated once.
class ExprDag {
public:
    int intern(const ExprPtr& e) {
        auto seen = by_ptr_.find(e.get());
        if (seen != by_ptr_.end()) return seen->second;
        int l = e->lhs ? intern(e->lhs) : -1;
        int r = e->rhs ? intern(e->rhs) : -1;
        Key key{e->op, e->label, l, r};
        auto [it, inserted] = ids_.try_emplace(key, static_cast<int>(nodes_.size()));
        if (inserted) nodes_.push_back(key);
        by_ptr_.emplace(e.get(), it->second);
        return it->second;
    }

    struct Key {
        Op op;
        std::string label;
        int lhs;
        int rhs;
        friend bool operator<(const Key& a, const Key& b) {
            return std::tie(a.op, a.label, a.lhs, a.rhs) <
                   std::tie(b.op, b.label, b.lhs, b.rhs);
        }
    };

    const std::vector<Key>& nodes() const { return nodes_; }

private:
    std::map<Key, int> ids_;
    std::map<const Expr*, int> by_ptr_;
    std::vector<Key> nodes_;
};

} // namespace detail

/// Exact set semantics of e over g, as a relation on adom(g). Bottom-up
/// over the expression DAG with bit-matrix relations.
inline BinaryRelation evaluate(const ExprPtr& e, const Graph& g,
                               const EvalConfig& config = {}) {
    std::set<std::string> vocab;
    if (config.vocabulary) {
        vocab = *config.vocabulary;
    } else {
        for (const auto& l : g.labels()) vocab.insert(l);
    }
    detail::check_expr(e, config.profile, vocab);

    detail::ExprDag dag;
    int root = dag.intern(e);
    const int n = g.adom_size();
    std::vector<BinaryRelation> value(dag.nodes().size());
    for (std::size_t i = 0; i < dag.nodes().size(); ++i) {
        const auto& node = dag.nodes()[i];
        switch (node.op) {
            case Op::Label: value[i] = g.relation(node.label); break;
            case Op::Empty: value[i] = BinaryRelation::empty(n); break;
            case Op::Id: value[i] = BinaryRelation::identity(n); break;
            case Op::Di: value[i] = BinaryRelation::diversity(n); break;
            case Op::Compose: value[i] = compose(value[node.lhs], value[node.rhs]); break;
            case Op::Union: value[i] = set_union(value[node.lhs], value[node.rhs]); break;
            case Op::Intersect: value[i] = set_intersect(value[node.lhs], value[node.rhs]); break;
            case Op::Diff: value[i] = set_difference(value[node.lhs], value[node.rhs]); break;
            case Op::Converse: value[i] = converse(value[node.lhs]); break;
            case Op::Proj1: value[i] = proj1(value[node.lhs]); break;
            case Op::Proj2: value[i] = proj2(value[node.lhs]); break;
            case Op::Coproj1: value[i] = coproj1(value[node.lhs]); break;
            case Op::Coproj2: value[i] = coproj2(value[node.lhs]); break;
        }
    }
    return value[root];
}

/// Nonemptiness of e(g): the boolean query expressed by e.
inline bool boolean_query(const ExprPtr& e, const Graph& g,
                          const EvalConfig& config = {}) {
    return !evaluate(e, g, config).is_empty();
}

} // namespace navalg
