#pragma once

#include <string>
#include <vector>

#include "navalg/expr.hpp"
#include "navalg/lattice.hpp"

namespace navalg {

// ---------------------------------------------------------------------------
// Shared helpers on composition chains
// ---------------------------------------------------------------------------

namespace detail {

inline void flatten_compose(const ExprPtr& e, std::vector<ExprPtr>& out) {
    if (e->op == Op::Compose) {
        flatten_compose(e->lhs, out);
        flatten_compose(e->rhs, out);
    } else {
        out.push_back(e);
    }
}

inline std::vector<ExprPtr> compose_factors_of(const ExprPtr& e) {
    std::vector<ExprPtr> out;
    flatten_compose(e, out);
    return out;
}

/// Left-associated composition of the given factors, splicing factors
/// that are themselves compositions so chains always come out flat.
inline ExprPtr compose_chain(const std::vector<ExprPtr>& factors) {
    std::vector<ExprPtr> flat;
    for (const auto& f : factors) flatten_compose(f, flat);
    ExprPtr e = flat.front();
    for (std::size_t i = 1; i < flat.size(); ++i) e = mk_compose(e, flat[i]);
    return e;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Converse pushing
// ---------------------------------------------------------------------------

/// Equivalent expression in which Converse wraps only edge labels.
/// Uses conv(e1.e2) = conv(e2).conv(e1), distribution over union,
/// intersection and difference, conv(id)=id, conv(di)=di, conv(0)=0,
/// conv(conv(e))=e, and transparency through (co)projections.
inline ExprPtr push_converse_to_atoms(const ExprPtr& e) {
    if (e->op == Op::Converse) {
        const ExprPtr& x = e->lhs;
        switch (x->op) {
            case Op::Label: return e;
            case Op::Empty:
            case Op::Id:
            case Op::Di: return x;
            case Op::Converse: return push_converse_to_atoms(x->lhs);
            case Op::Compose:
                return mk_compose(push_converse_to_atoms(mk_converse(x->rhs)),
                                  push_converse_to_atoms(mk_converse(x->lhs)));
            case Op::Union:
                return mk_union(push_converse_to_atoms(mk_converse(x->lhs)),
                                push_converse_to_atoms(mk_converse(x->rhs)));
            case Op::Intersect:
                return mk_intersect(push_converse_to_atoms(mk_converse(x->lhs)),
                                    push_converse_to_atoms(mk_converse(x->rhs)));
            case Op::Diff:
                return mk_diff(push_converse_to_atoms(mk_converse(x->lhs)),
                               push_converse_to_atoms(mk_converse(x->rhs)));
            case Op::Proj1: return mk_proj1(push_converse_to_atoms(x->lhs));
            case Op::Proj2: return mk_proj2(push_converse_to_atoms(x->lhs));
            case Op::Coproj1: return mk_coproj1(push_converse_to_atoms(x->lhs));
            case Op::Coproj2: return mk_coproj2(push_converse_to_atoms(x->lhs));
        }
    }
    if (is_binary(e->op))
        return std::make_shared<Expr>(Expr{e->op, {}, push_converse_to_atoms(e->lhs),
                                           push_converse_to_atoms(e->rhs)});
    if (is_unary(e->op))
        return std::make_shared<Expr>(
            Expr{e->op, {}, push_converse_to_atoms(e->lhs), nullptr});
    return e;
}

// ---------------------------------------------------------------------------
// Union hoisting
// ---------------------------------------------------------------------------

/// Splits e into union-free expressions whose pointwise union equals e.
/// Complete only for the fragment without intersection, difference and
/// coprojection; those operators are rejected.
inline std::vector<ExprPtr> hoist_unions(const ExprPtr& e) {
    switch (e->op) {
        case Op::Intersect:
        case Op::Diff:
        case Op::Coproj1:
        case Op::Coproj2:
            throw PreconditionError(
                "hoist_unions: expression contains a non-distributive operator");
        case Op::Union: {
            std::vector<ExprPtr> out = hoist_unions(e->lhs);
            std::vector<ExprPtr> rhs = hoist_unions(e->rhs);
            out.insert(out.end(), rhs.begin(), rhs.end());
            return out;
        }
        case Op::Compose: {
            std::vector<ExprPtr> out;
            for (const auto& l : hoist_unions(e->lhs))
                for (const auto& r : hoist_unions(e->rhs)) out.push_back(mk_compose(l, r));
            return out;
        }
        case Op::Converse: {
            std::vector<ExprPtr> out;
            for (const auto& x : hoist_unions(e->lhs)) out.push_back(mk_converse(x));
            return out;
        }
        case Op::Proj1:
        case Op::Proj2: {
            std::vector<ExprPtr> out;
            for (const auto& x : hoist_unions(e->lhs))
                out.push_back(e->op == Op::Proj1 ? mk_proj1(x) : mk_proj2(x));
            return out;
        }
        default:
            return {e};
    }
}

// ---------------------------------------------------------------------------
// Feature interdependency elimination
// ---------------------------------------------------------------------------

/// How a rewrite output may relate to its input.
struct RewriteTarget {
    enum class Mode { PathEquivalent, BooleanEquivalent };
    FeatureSet target;
    Mode mode = Mode::PathEquivalent;
};

namespace detail {

[[noreturn]] inline void unreachable_target(FeatureSet used, FeatureSet target) {
    FeatureSet bar = closure_bar(target);
    for (Feature f : {kDi, kConv, kPi, kCopi, kCap, kDiff}) {
        if (used.has(f) && !bar.has(f))
            throw UnreachableTargetError(
                std::string("target feature set cannot express '") + feature_name(f) +
                    "'",
                feature_name(f));
    }
    throw UnreachableTargetError("target feature set unreachable", "");
}

class DerivableEliminator {
public:
    explicit DerivableEliminator(FeatureSet target) : t_(target) {}

    ExprPtr rewrite(const ExprPtr& e) {
        switch (e->op) {
            case Op::Label:
            case Op::Empty:
            case Op::Id:
            case Op::Di:
                return e;
            case Op::Compose: return mk_compose(rewrite(e->lhs), rewrite(e->rhs));
            case Op::Union: return mk_union(rewrite(e->lhs), rewrite(e->rhs));
            case Op::Converse: return mk_converse(rewrite(e->lhs));
            case Op::Diff: return mk_diff(rewrite(e->lhs), rewrite(e->rhs));
            case Op::Intersect: return intersect_of(rewrite(e->lhs), rewrite(e->rhs));
            case Op::Proj1: return proj_of(rewrite(e->lhs), 1);
            case Op::Proj2: return proj_of(rewrite(e->lhs), 2);
            case Op::Coproj1: return coproj_of(rewrite(e->lhs), 1);
            case Op::Coproj2: return coproj_of(rewrite(e->lhs), 2);
        }
        return e;
    }

private:
    bool cap_available() const { return t_.has_cap() || t_.has_diff(); }

    ExprPtr intersect_of(ExprPtr a, ExprPtr b) {
        if (t_.has_cap()) return mk_intersect(std::move(a), std::move(b));
        // e1 & e2 = e1 - (e1 - e2)
        return mk_diff(a, mk_diff(a, std::move(b)));
    }

    /// pi_i(a) in target features. Preference order: direct, the
    /// converse form, the diversity form, coprojection doubling.
    ExprPtr proj_of(const ExprPtr& a, int i) {
        if (t_.has_pi()) return i == 1 ? mk_proj1(a) : mk_proj2(a);
        if (t_.has_conv() && cap_available()) {
            ExprPtr prod = i == 1 ? mk_compose(a, mk_converse(a))
                                  : mk_compose(mk_converse(a), a);
            return intersect_of(std::move(prod), mk_id());
        }
        if (t_.has_di() && cap_available()) {
            ExprPtr top = mk_union(mk_id(), mk_di());
            ExprPtr prod = i == 1 ? mk_compose(a, std::move(top))
                                  : mk_compose(std::move(top), a);
            return intersect_of(std::move(prod), mk_id());
        }
        if (t_.has_copi()) {
            ExprPtr inner = i == 1 ? mk_coproj1(a) : mk_coproj2(a);
            return i == 1 ? mk_coproj1(std::move(inner)) : mk_coproj2(std::move(inner));
        }
        throw UnreachableTargetError("projection not expressible in target", "pi");
    }

    ExprPtr coproj_of(const ExprPtr& a, int i) {
        if (t_.has_copi()) return i == 1 ? mk_coproj1(a) : mk_coproj2(a);
        if (t_.has_diff()) return mk_diff(mk_id(), proj_of(a, i));
        throw UnreachableTargetError("coprojection not expressible in target", "copi");
    }

    FeatureSet t_;
};

} // namespace detail

/// Rewrites e into an expression over exactly the target features,
/// pointwise equivalent on every graph. Requires
/// features_used(e) within closure_bar(target).
inline ExprPtr eliminate_derivable(const ExprPtr& e, const RewriteTarget& t) {
    FeatureSet used = features_used(e);
    if (!subset(used, closure_bar(t.target)))
        detail::unreachable_target(used, t.target);
    return detail::DerivableEliminator(t.target).rewrite(e);
}

// ---------------------------------------------------------------------------
// Converse elimination for boolean queries
// ---------------------------------------------------------------------------
//
// Computes the pi1-translation of an expression over a fragment with
// neither intersection nor difference: an equivalent-to-pi1(e)
// expression with every Converse eliminated, nonempty exactly when e
// is. The translation follows the left/right decomposition rule tables:
// a composition chain is split into its leading (resp. trailing) simple
// factors and the first factor that needs action, and the rules for
// conv R, projections, coprojections and union are applied there.
// Consecutive simple-factor steps are emitted as one chain, which keeps
// converse-free chains verbatim under the projection.

namespace detail {

class ConverseEliminator {
public:
    /// Expression equal to pi_i(e), free of Converse nodes.
    ExprPtr proj(const ExprPtr& e, int i) {
        if (e->op == Op::Compose) return proj_chain(compose_factors_of(e), i);
        switch (e->op) {
            case Op::Converse:
                // conv only wraps labels after pushing
                return i == 1 ? mk_proj2(e->lhs) : mk_proj1(e->lhs);
            case Op::Proj1: return proj(e->lhs, 1);
            case Op::Proj2: return proj(e->lhs, 2);
            case Op::Coproj1: return coproj(e->lhs, 1);
            case Op::Coproj2: return coproj(e->lhs, 2);
            case Op::Union:
                return mk_union(proj(e->lhs, i), proj(e->rhs, i));
            default:
                return i == 1 ? mk_proj1(e) : mk_proj2(e);
        }
    }

    /// Expression equal to copi_i(e), free of Converse nodes.
    ExprPtr coproj(const ExprPtr& e, int i) {
        if (e->op == Op::Compose) return coproj_chain(compose_factors_of(e), i);
        switch (e->op) {
            case Op::Converse:
                return i == 1 ? mk_coproj2(e->lhs) : mk_coproj1(e->lhs);
            case Op::Proj1: return coproj(e->lhs, 1);
            case Op::Proj2: return coproj(e->lhs, 2);
            case Op::Coproj1: return proj(e->lhs, 1);
            case Op::Coproj2: return proj(e->lhs, 2);
            case Op::Union:
                return compose_chain({coproj(e->lhs, i), coproj(e->rhs, i)});
            default:
                return i == 1 ? mk_coproj1(e) : mk_coproj2(e);
        }
    }

private:
    static bool is_simple(const ExprPtr& f) {
        return f->op == Op::Label || f->op == Op::Di || f->op == Op::Empty ||
               f->op == Op::Id;
    }

    static ExprPtr fold(const std::vector<ExprPtr>& factors) {
        return compose_chain(factors);
    }

    /// pi_i over a factor chain. For i=1 the chain is scanned from the
    /// left: id factors drop, labels/di/0 are kept in place, and the
    /// first converse/projection/coprojection/union factor is resolved
    /// by its rule. For i=2, mirrored from the right.
    ExprPtr proj_chain(const std::vector<ExprPtr>& factors, int i) {
        std::vector<ExprPtr> kept;
        int action = -1;
        const int k = static_cast<int>(factors.size());
        if (i == 1) {
            for (int j = 0; j < k; ++j) {
                const ExprPtr& f = factors[j];
                if (f->op == Op::Id) continue;
                if (is_simple(f)) { kept.push_back(f); continue; }
                action = j;
                break;
            }
        } else {
            for (int j = k - 1; j >= 0; --j) {
                const ExprPtr& f = factors[j];
                if (f->op == Op::Id) continue;
                if (is_simple(f)) { kept.insert(kept.begin(), f); continue; }
                action = j;
                break;
            }
        }
        if (action < 0) {
            // converse-free simple chain: emit the projection verbatim
            ExprPtr body = kept.empty() ? mk_id() : fold(kept);
            return i == 1 ? mk_proj1(body) : mk_proj2(body);
        }
        std::vector<ExprPtr> remainder;
        ExprPtr inner;
        if (i == 1) {
            remainder.assign(factors.begin() + action + 1, factors.end());
            inner = proj_action_left(factors[action], remainder);
        } else {
            remainder.assign(factors.begin(), factors.begin() + action);
            inner = proj_action_right(factors[action], remainder);
        }
        if (kept.empty()) return inner;
        std::vector<ExprPtr> out = kept;
        if (i == 1) {
            out.push_back(inner);
            return mk_proj1(fold(out));
        }
        out.insert(out.begin(), inner);
        return mk_proj2(fold(out));
    }

    /// pi1(f . rest...) where f is the leading action factor.
    ExprPtr proj_action_left(const ExprPtr& f, const std::vector<ExprPtr>& rest) {
        if (rest.empty()) return proj(f, 1);
        ExprPtr tail = fold(rest);
        switch (f->op) {
            case Op::Converse:
                // pi1(conv R . e4) = pi2(pi1(e4) . R)
                return mk_proj2(compose_chain({proj(tail, 1), f->lhs}));
            case Op::Proj1:
            case Op::Proj2: {
                int j = f->op == Op::Proj1 ? 1 : 2;
                return compose_chain({proj(f->lhs, j), proj(tail, 1)});
            }
            case Op::Coproj1:
            case Op::Coproj2: {
                int j = f->op == Op::Coproj1 ? 1 : 2;
                return compose_chain({coproj(f->lhs, j), proj(tail, 1)});
            }
            case Op::Union: {
                std::vector<ExprPtr> left{f->lhs}, right{f->rhs};
                left.insert(left.end(), rest.begin(), rest.end());
                right.insert(right.end(), rest.begin(), rest.end());
                return mk_union(proj(fold(left), 1), proj(fold(right), 1));
            }
            default:
                break;
        }
        throw PreconditionError("converse elimination: unexpected leading factor");
    }

    /// pi2(front... . f) where f is the trailing action factor.
    ExprPtr proj_action_right(const ExprPtr& f, const std::vector<ExprPtr>& front) {
        if (front.empty()) return proj(f, 2);
        ExprPtr head = fold(front);
        switch (f->op) {
            case Op::Converse:
                // pi2(e4 . conv R) = pi1(R . pi2(e4))
                return mk_proj1(compose_chain({f->lhs, proj(head, 2)}));
            case Op::Proj1:
            case Op::Proj2: {
                int j = f->op == Op::Proj1 ? 1 : 2;
                return compose_chain({proj(head, 2), proj(f->lhs, j)});
            }
            case Op::Coproj1:
            case Op::Coproj2: {
                int j = f->op == Op::Coproj1 ? 1 : 2;
                return compose_chain({proj(head, 2), coproj(f->lhs, j)});
            }
            case Op::Union: {
                std::vector<ExprPtr> left = front, right = front;
                left.push_back(f->lhs);
                right.push_back(f->rhs);
                return mk_union(proj(fold(left), 2), proj(fold(right), 2));
            }
            default:
                break;
        }
        throw PreconditionError("converse elimination: unexpected trailing factor");
    }

    /// copi_i over a factor chain; only the outermost wrapper is a
    /// coprojection, inner steps recurse through the pi tables.
    ExprPtr coproj_chain(const std::vector<ExprPtr>& factors, int i) {
        std::vector<ExprPtr> kept;
        int action = -1;
        const int k = static_cast<int>(factors.size());
        if (i == 1) {
            for (int j = 0; j < k; ++j) {
                const ExprPtr& f = factors[j];
                if (f->op == Op::Id) continue;
                if (is_simple(f)) { kept.push_back(f); continue; }
                action = j;
                break;
            }
        } else {
            for (int j = k - 1; j >= 0; --j) {
                const ExprPtr& f = factors[j];
                if (f->op == Op::Id) continue;
                if (is_simple(f)) { kept.insert(kept.begin(), f); continue; }
                action = j;
                break;
            }
        }
        if (action < 0) {
            ExprPtr body = kept.empty() ? mk_id() : fold(kept);
            return i == 1 ? mk_coproj1(body) : mk_coproj2(body);
        }
        std::vector<ExprPtr> remainder;
        if (i == 1) {
            remainder.assign(factors.begin() + action + 1, factors.end());
            if (kept.empty()) return coproj_action_left(factors[action], remainder);
            // copi1(p . X) = copi1(p . pi1(X))
            std::vector<ExprPtr> out = kept;
            out.push_back(proj_action_left(factors[action], remainder));
            return mk_coproj1(fold(out));
        }
        remainder.assign(factors.begin(), factors.begin() + action);
        if (kept.empty()) return coproj_action_right(factors[action], remainder);
        std::vector<ExprPtr> out = kept;
        out.insert(out.begin(), proj_action_right(factors[action], remainder));
        return mk_coproj2(fold(out));
    }

    ExprPtr coproj_action_left(const ExprPtr& f, const std::vector<ExprPtr>& rest) {
        if (rest.empty()) return coproj(f, 1);
        ExprPtr tail = fold(rest);
        switch (f->op) {
            case Op::Converse:
                // copi1(conv R . e4) = copi2(pi1(e4) . R)
                return mk_coproj2(compose_chain({proj(tail, 1), f->lhs}));
            case Op::Proj1:
            case Op::Proj2: {
                int j = f->op == Op::Proj1 ? 1 : 2;
                // copi1(pi_j(e5) . e4) = copi_j(e5) | copi1(e4)
                return mk_union(coproj(f->lhs, j), coproj(tail, 1));
            }
            case Op::Coproj1:
            case Op::Coproj2: {
                int j = f->op == Op::Coproj1 ? 1 : 2;
                // copi1(copi_j(e5) . e4) = pi_j(e5) | copi1(e4)
                return mk_union(proj(f->lhs, j), coproj(tail, 1));
            }
            case Op::Union: {
                std::vector<ExprPtr> left{f->lhs}, right{f->rhs};
                left.insert(left.end(), rest.begin(), rest.end());
                right.insert(right.end(), rest.begin(), rest.end());
                // copi1((e5|e6) . e4) = copi1(e5.e4) . copi1(e6.e4)
                return compose_chain({coproj(fold(left), 1), coproj(fold(right), 1)});
            }
            default:
                break;
        }
        throw PreconditionError("converse elimination: unexpected leading factor");
    }

    ExprPtr coproj_action_right(const ExprPtr& f, const std::vector<ExprPtr>& front) {
        if (front.empty()) return coproj(f, 2);
        ExprPtr head = fold(front);
        switch (f->op) {
            case Op::Converse:
                // copi2(e4 . conv R) = copi1(R . pi2(e4))
                return mk_coproj1(compose_chain({f->lhs, proj(head, 2)}));
            case Op::Proj1:
            case Op::Proj2: {
                int j = f->op == Op::Proj1 ? 1 : 2;
                return mk_union(coproj(f->lhs, j), coproj(head, 2));
            }
            case Op::Coproj1:
            case Op::Coproj2: {
                int j = f->op == Op::Coproj1 ? 1 : 2;
                return mk_union(proj(f->lhs, j), coproj(head, 2));
            }
            case Op::Union: {
                std::vector<ExprPtr> left = front, right = front;
                left.push_back(f->lhs);
                right.push_back(f->rhs);
                return compose_chain({coproj(fold(left), 2), coproj(fold(right), 2)});
            }
            default:
                break;
        }
        throw PreconditionError("converse elimination: unexpected trailing factor");
    }
};

} // namespace detail

/// The pi1-translation of e: an expression with no Converse node whose
/// nonemptiness agrees with e on every graph and which is pointwise
/// equal to pi1(e). Requires e free of intersection and difference.
inline ExprPtr eliminate_converse_boolean(const ExprPtr& e) {
    FeatureSet used = features_used(e);
    if (used.has_cap() || used.has_diff())
        throw PreconditionError(
            "converse elimination requires an expression without '&' and '-'");
    ExprPtr pushed = push_converse_to_atoms(e);
    return detail::ConverseEliminator().proj(pushed, 1);
}

// ---------------------------------------------------------------------------
// XPath path-equality desugaring
// ---------------------------------------------------------------------------

/// The path-equality operator .[e1=e2] as an expression over the target
/// features: pi1(e1 & e2), or ((e1 . conv(e2)) & id) when the target has
/// converse instead of projection. Derivable leftovers (the '&') are
/// eliminated toward the target afterwards.
inline ExprPtr desugar_path_equality(const ExprPtr& e1, const ExprPtr& e2,
                                     FeatureSet target) {
    FeatureSet bar = closure_bar(target);
    FeatureSet used = features_used(e1) | features_used(e2);
    if (!subset(used, bar)) detail::unreachable_target(used, target);
    const bool cap_reachable = bar.has_cap();
    ExprPtr form;
    if (target.has_pi() && cap_reachable) {
        form = mk_proj1(mk_intersect(e1, e2));
    } else if (target.has_conv() && cap_reachable) {
        form = mk_intersect(mk_compose(e1, mk_converse(e2)), mk_id());
    } else if (bar.has_pi() && cap_reachable) {
        form = mk_proj1(mk_intersect(e1, e2));
    } else {
        throw UnreachableTargetError(
            "path equality needs pi+cap or conv+cap in the target closure", "cap");
    }
    return eliminate_derivable(form, {target, RewriteTarget::Mode::PathEquivalent});
}

// ---------------------------------------------------------------------------
// Combined entry point
// ---------------------------------------------------------------------------

/// Rewrite e into N(target). Path mode demands pointwise equivalence;
/// boolean mode additionally admits the converse collapse (the
/// pi1-translation), preserving nonemptiness only.
inline ExprPtr rewrite_expr(const ExprPtr& e, const RewriteTarget& t) {
    FeatureSet used = features_used(e);
    FeatureSet bar = closure_bar(t.target);
    if (subset(used, bar))
        return eliminate_derivable(e, t);
    if (t.mode == RewriteTarget::Mode::BooleanEquivalent &&
        subset(closure_tilde(used), bar)) {
        ExprPtr translated = eliminate_converse_boolean(e);
        return eliminate_derivable(translated, t);
    }
    detail::unreachable_target(
        t.mode == RewriteTarget::Mode::BooleanEquivalent ? closure_tilde(used) : used,
        t.target);
}

} // namespace navalg
