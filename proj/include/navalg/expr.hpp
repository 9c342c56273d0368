#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "navalg/errors.hpp"

namespace navalg {

// ---------------------------------------------------------------------------
// Feature sets
// ---------------------------------------------------------------------------

/// One of the six nonbasic features. The basic features (empty, id,
/// composition, union) belong to every fragment. Bit order doubles as
/// the canonical feature order: di < conv < pi < copi < cap < diff.
enum Feature : std::uint8_t {
    kDi = 1 << 0,
    kConv = 1 << 1,
    kPi = 1 << 2,
    kCopi = 1 << 3,
    kCap = 1 << 4,
    kDiff = 1 << 5,
};

/// Subset of the six nonbasic features, identifying a fragment N(F).
struct FeatureSet {
    std::uint8_t mask = 0;

    constexpr FeatureSet() = default;
    constexpr explicit FeatureSet(std::uint8_t m) : mask(m) {}

    constexpr bool has(Feature f) const { return mask & f; }
    constexpr bool has_di() const { return has(kDi); }
    constexpr bool has_conv() const { return has(kConv); }
    constexpr bool has_pi() const { return has(kPi); }
    constexpr bool has_copi() const { return has(kCopi); }
    constexpr bool has_cap() const { return has(kCap); }
    constexpr bool has_diff() const { return has(kDiff); }

    constexpr FeatureSet with(Feature f) const {
        return FeatureSet(static_cast<std::uint8_t>(mask | f));
    }
    constexpr FeatureSet without(Feature f) const {
        return FeatureSet(static_cast<std::uint8_t>(mask & ~f));
    }

    constexpr int size() const { return __builtin_popcount(mask); }

    friend constexpr bool operator==(FeatureSet a, FeatureSet b) {
        return a.mask == b.mask;
    }
    friend constexpr bool operator!=(FeatureSet a, FeatureSet b) {
        return a.mask != b.mask;
    }
    /// Subset order.
    friend constexpr bool subset(FeatureSet a, FeatureSet b) {
        return (a.mask & ~b.mask) == 0;
    }
    friend constexpr FeatureSet operator|(FeatureSet a, FeatureSet b) {
        return FeatureSet(static_cast<std::uint8_t>(a.mask | b.mask));
    }
};

inline const char* feature_name(Feature f) {
    switch (f) {
        case kDi: return "di";
        case kConv: return "conv";
        case kPi: return "pi";
        case kCopi: return "copi";
        case kCap: return "cap";
        case kDiff: return "diff";
    }
    return "?";
}

inline std::string to_string(FeatureSet fs) {
    std::string out;
    for (Feature f : {kDi, kConv, kPi, kCopi, kCap, kDiff}) {
        if (!fs.has(f)) continue;
        if (!out.empty()) out += ',';
        out += feature_name(f);
    }
    return out.empty() ? "(basic)" : out;
}

/// Evaluation-level operator switches. Unlike FeatureSet this carries
/// independent flags for the one-sided projections and coprojections,
/// which the expressiveness lattice never distinguishes.
struct OperatorProfile {
    bool di = false;
    bool conv = false;
    bool pi1 = false;
    bool pi2 = false;
    bool copi1 = false;
    bool copi2 = false;
    bool cap = false;
    bool diff = false;

    static OperatorProfile all() {
        return {true, true, true, true, true, true, true, true};
    }

    static OperatorProfile from_features(FeatureSet fs) {
        OperatorProfile p;
        p.di = fs.has_di();
        p.conv = fs.has_conv();
        p.pi1 = p.pi2 = fs.has_pi();
        p.copi1 = p.copi2 = fs.has_copi();
        p.cap = fs.has_cap();
        p.diff = fs.has_diff();
        return p;
    }
};

/// Parse a comma-separated feature list, e.g. "di,conv,cap".
/// One-sided tokens (pi1, copi2, ...) are accepted when `profile` output
/// is wanted; parse_features rejects them.
inline FeatureSet parse_features(std::string_view text) {
    FeatureSet fs;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string_view tok = text.substr(
            pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
        while (!tok.empty() && (tok.front() == ' ')) tok.remove_prefix(1);
        while (!tok.empty() && (tok.back() == ' ')) tok.remove_suffix(1);
        if (tok == "di") fs = fs.with(kDi);
        else if (tok == "conv") fs = fs.with(kConv);
        else if (tok == "pi") fs = fs.with(kPi);
        else if (tok == "copi") fs = fs.with(kCopi);
        else if (tok == "cap") fs = fs.with(kCap);
        else if (tok == "diff") fs = fs.with(kDiff);
        else if (!tok.empty())
            throw SchemaError("unknown feature token: " + std::string(tok));
        pos = comma == std::string_view::npos ? text.size() : comma + 1;
    }
    return fs;
}

inline OperatorProfile parse_profile(std::string_view text) {
    OperatorProfile p;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string_view tok = text.substr(
            pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
        while (!tok.empty() && (tok.front() == ' ')) tok.remove_prefix(1);
        while (!tok.empty() && (tok.back() == ' ')) tok.remove_suffix(1);
        if (tok == "di") p.di = true;
        else if (tok == "conv") p.conv = true;
        else if (tok == "pi") p.pi1 = p.pi2 = true;
        else if (tok == "copi") p.copi1 = p.copi2 = true;
        else if (tok == "pi1") p.pi1 = true;
        else if (tok == "pi2") p.pi2 = true;
        else if (tok == "copi1") p.copi1 = true;
        else if (tok == "copi2") p.copi2 = true;
        else if (tok == "cap") p.cap = true;
        else if (tok == "diff") p.diff = true;
        else if (!tok.empty())
            throw SchemaError("unknown operator token: " + std::string(tok));
        pos = comma == std::string_view::npos ? text.size() : comma + 1;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Abstract syntax
// ---------------------------------------------------------------------------

enum class Op {
    Label,
    Empty,
    Id,
    Di,
    Compose,
    Union,
    Intersect,
    Diff,
    Converse,
    Proj1,
    Proj2,
    Coproj1,
    Coproj2,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable AST node. Unary operators use `lhs`.
struct Expr {
    Op op;
    std::string label; // only for Op::Label
    ExprPtr lhs;
    ExprPtr rhs;
};

inline ExprPtr mk_label(std::string name) {
    return std::make_shared<Expr>(Expr{Op::Label, std::move(name), nullptr, nullptr});
}
inline ExprPtr mk_empty() { return std::make_shared<Expr>(Expr{Op::Empty, {}, nullptr, nullptr}); }
inline ExprPtr mk_id() { return std::make_shared<Expr>(Expr{Op::Id, {}, nullptr, nullptr}); }
inline ExprPtr mk_di() { return std::make_shared<Expr>(Expr{Op::Di, {}, nullptr, nullptr}); }
inline ExprPtr mk_compose(ExprPtr l, ExprPtr r) {
    return std::make_shared<Expr>(Expr{Op::Compose, {}, std::move(l), std::move(r)});
}
inline ExprPtr mk_union(ExprPtr l, ExprPtr r) {
    return std::make_shared<Expr>(Expr{Op::Union, {}, std::move(l), std::move(r)});
}
inline ExprPtr mk_intersect(ExprPtr l, ExprPtr r) {
    return std::make_shared<Expr>(Expr{Op::Intersect, {}, std::move(l), std::move(r)});
}
inline ExprPtr mk_diff(ExprPtr l, ExprPtr r) {
    return std::make_shared<Expr>(Expr{Op::Diff, {}, std::move(l), std::move(r)});
}
inline ExprPtr mk_converse(ExprPtr e) {
    return std::make_shared<Expr>(Expr{Op::Converse, {}, std::move(e), nullptr});
}
inline ExprPtr mk_proj1(ExprPtr e) {
    return std::make_shared<Expr>(Expr{Op::Proj1, {}, std::move(e), nullptr});
}
inline ExprPtr mk_proj2(ExprPtr e) {
    return std::make_shared<Expr>(Expr{Op::Proj2, {}, std::move(e), nullptr});
}
inline ExprPtr mk_coproj1(ExprPtr e) {
    return std::make_shared<Expr>(Expr{Op::Coproj1, {}, std::move(e), nullptr});
}
inline ExprPtr mk_coproj2(ExprPtr e) {
    return std::make_shared<Expr>(Expr{Op::Coproj2, {}, std::move(e), nullptr});
}

inline bool is_unary(Op op) {
    switch (op) {
        case Op::Converse:
        case Op::Proj1:
        case Op::Proj2:
        case Op::Coproj1:
        case Op::Coproj2:
            return true;
        default:
            return false;
    }
}

inline bool is_binary(Op op) {
    switch (op) {
        case Op::Compose:
        case Op::Union:
        case Op::Intersect:
        case Op::Diff:
            return true;
        default:
            return false;
    }
}

inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->op != b->op || a->label != b->label) return false;
    if (is_binary(a->op)) return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
    if (is_unary(a->op)) return expr_equal(a->lhs, b->lhs);
    return true;
}

/// AST node count; shared subtrees count once per occurrence.
inline int expr_size(const ExprPtr& e) {
    if (is_binary(e->op)) return 1 + expr_size(e->lhs) + expr_size(e->rhs);
    if (is_unary(e->op)) return 1 + expr_size(e->lhs);
    return 1;
}

/// Maximum depth of nested applications of composition, projection and
/// coprojection. Union, intersection, difference and converse are
/// transparent; atoms have degree 0.
inline int expr_degree(const ExprPtr& e) {
    switch (e->op) {
        case Op::Label:
        case Op::Empty:
        case Op::Id:
        case Op::Di:
            return 0;
        case Op::Compose:
            return 1 + std::max(expr_degree(e->lhs), expr_degree(e->rhs));
        case Op::Union:
        case Op::Intersect:
        case Op::Diff:
            return std::max(expr_degree(e->lhs), expr_degree(e->rhs));
        case Op::Converse:
            return expr_degree(e->lhs);
        case Op::Proj1:
        case Op::Proj2:
        case Op::Coproj1:
        case Op::Coproj2:
            return 1 + expr_degree(e->lhs);
    }
    return 0;
}

/// Minimal feature set whose fragment syntactically contains e.
inline FeatureSet features_used(const ExprPtr& e) {
    FeatureSet fs;
    switch (e->op) {
        case Op::Di: return FeatureSet(kDi);
        case Op::Converse: fs = FeatureSet(kConv); break;
        case Op::Intersect: fs = FeatureSet(kCap); break;
        case Op::Diff: fs = FeatureSet(kDiff); break;
        case Op::Proj1:
        case Op::Proj2: fs = FeatureSet(kPi); break;
        case Op::Coproj1:
        case Op::Coproj2: fs = FeatureSet(kCopi); break;
        default: break;
    }
    if (is_binary(e->op)) return fs | features_used(e->lhs) | features_used(e->rhs);
    if (is_unary(e->op)) return fs | features_used(e->lhs);
    return fs;
}

/// Labels mentioned in e, in first-occurrence order.
inline void collect_labels(const ExprPtr& e, std::vector<std::string>& out) {
    if (e->op == Op::Label) {
        for (const auto& l : out)
            if (l == e->label) return;
        out.push_back(e->label);
        return;
    }
    if (e->lhs) collect_labels(e->lhs, out);
    if (e->rhs) collect_labels(e->rhs, out);
}

inline std::vector<std::string> expr_labels(const ExprPtr& e) {
    std::vector<std::string> out;
    collect_labels(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

/// Fully parenthesized canonical text; parse(render(e)) == e.
inline std::string render_expr(const ExprPtr& e) {
    switch (e->op) {
        case Op::Label: return e->label;
        case Op::Empty: return "0";
        case Op::Id: return "id";
        case Op::Di: return "di";
        case Op::Compose: return "(" + render_expr(e->lhs) + " . " + render_expr(e->rhs) + ")";
        case Op::Union: return "(" + render_expr(e->lhs) + " | " + render_expr(e->rhs) + ")";
        case Op::Intersect: return "(" + render_expr(e->lhs) + " & " + render_expr(e->rhs) + ")";
        case Op::Diff: return "(" + render_expr(e->lhs) + " - " + render_expr(e->rhs) + ")";
        case Op::Converse: return "conv(" + render_expr(e->lhs) + ")";
        case Op::Proj1: return "pi1(" + render_expr(e->lhs) + ")";
        case Op::Proj2: return "pi2(" + render_expr(e->lhs) + ")";
        case Op::Coproj1: return "copi1(" + render_expr(e->lhs) + ")";
        case Op::Coproj2: return "copi2(" + render_expr(e->lhs) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------
//
// Grammar (high to low precedence, all binaries left-associative):
//   expr  := union
//   union := diff ("|" diff)*
//   diff  := inter ("-" inter)*
//   inter := comp ("&" comp)*
//   comp  := atom ("." atom)*
//   atom  := ("0" | "id" | "di" | LABEL | FN "(" expr ")" | "(" expr ")") ("^" NAT)?
// FN is one of conv, pi1, pi2, copi1, copi2. The reserved words cannot
// be used as labels. X^k expands to the left-associated k-fold
// composition of X.

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    ExprPtr parse() {
        ExprPtr e = parse_union();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("expression syntax error at offset " + std::to_string(pos_) +
                             ": " + what,
                         pos_);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr parse_union() {
        ExprPtr e = parse_diff();
        while (eat('|')) e = mk_union(e, parse_diff());
        return e;
    }

    ExprPtr parse_diff() {
        ExprPtr e = parse_inter();
        while (eat('-')) e = mk_diff(e, parse_inter());
        return e;
    }

    ExprPtr parse_inter() {
        ExprPtr e = parse_comp();
        while (eat('&')) e = mk_intersect(e, parse_comp());
        return e;
    }

    ExprPtr parse_comp() {
        ExprPtr e = parse_atom();
        while (eat('.')) e = mk_compose(e, parse_atom());
        return e;
    }

    std::string read_word() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected an atom");
        ExprPtr e;
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            e = parse_union();
            if (!eat(')')) fail("expected ')'");
        } else if (c == '0') {
            ++pos_;
            e = mk_empty();
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t word_pos = pos_;
            std::string word = read_word();
            if (word == "id") {
                e = mk_id();
            } else if (word == "di") {
                e = mk_di();
            } else if (word == "conv" || word == "pi1" || word == "pi2" ||
                       word == "copi1" || word == "copi2") {
                if (!eat('(')) {
                    pos_ = word_pos;
                    fail("reserved word '" + word + "' cannot be used as a label");
                }
                ExprPtr arg = parse_union();
                if (!eat(')')) fail("expected ')'");
                if (word == "conv") e = mk_converse(arg);
                else if (word == "pi1") e = mk_proj1(arg);
                else if (word == "pi2") e = mk_proj2(arg);
                else if (word == "copi1") e = mk_coproj1(arg);
                else e = mk_coproj2(arg);
            } else {
                e = mk_label(word);
            }
        } else {
            fail(std::string("unexpected character '") + c + "'");
        }
        if (eat('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (pos_ == start) fail("expected an exponent after '^'");
            int k = std::stoi(std::string(text_.substr(start, pos_ - start)));
            if (k < 1) fail("exponent must be at least 1");
            ExprPtr folded = e;
            for (int i = 1; i < k; ++i) folded = mk_compose(folded, e);
            e = folded;
        }
        return e;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline ExprPtr parse_expr(std::string_view text) {
    return detail::ExprParser(text).parse();
}

} // namespace navalg
