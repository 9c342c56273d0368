#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "navalg/expr.hpp"

#include <json.hpp>

namespace navalg {

/// Least superset of f closed under the five derivation rules:
/// copi gives pi; cap+di give pi; cap+conv give pi; diff+pi give copi;
/// diff gives cap. Stabilizes within three iterations.
inline FeatureSet closure_bar(FeatureSet f) {
    for (;;) {
        FeatureSet next = f;
        if (next.has_copi()) next = next.with(kPi);
        if (next.has_cap() && next.has_di()) next = next.with(kPi);
        if (next.has_cap() && next.has_conv()) next = next.with(kPi);
        if (next.has_diff() && next.has_pi()) next = next.with(kCopi);
        if (next.has_diff()) next = next.with(kCap);
        if (next == f) return f;
        f = next;
    }
}

/// The boolean-level collapse of converse: when converse is derivable
/// but intersection is not, converse trades for projection.
inline FeatureSet closure_tilde(FeatureSet f) {
    FeatureSet bar = closure_bar(f);
    if (bar.has_conv() && !bar.has_cap())
        return f.without(kConv).with(kPi);
    return f;
}

/// N(f1) <=path N(f2), decided as f1 within closure_bar(f2).
inline bool leq_path(FeatureSet f1, FeatureSet f2) {
    return subset(f1, closure_bar(f2));
}

/// N(f1) <=bool N(f2): f1 within closure_bar(f2), or the converse
/// collapse of f1 within closure_bar(f2).
inline bool leq_bool(FeatureSet f1, FeatureSet f2) {
    FeatureSet bar2 = closure_bar(f2);
    return subset(f1, bar2) || subset(closure_tilde(f1), bar2);
}

enum class OrderKind { Path, Bool };

inline bool leq(OrderKind order, FeatureSet f1, FeatureSet f2) {
    return order == OrderKind::Path ? leq_path(f1, f2) : leq_bool(f1, f2);
}

/// An equivalence class of the chosen expressiveness preorder over the
/// 64 feature subsets.
///   canonical — the class representative: the common closure for the
///     path order; the member with the smallest bitmask for the boolean
///     order.
///   members   — every feature subset in the class.
///   boxed     — a minimum-cardinality member (ties broken by bitmask),
///     the "boxed" generating set shown in diagram nodes.
struct LanguageClass {
    FeatureSet canonical;
    std::vector<FeatureSet> members;
    FeatureSet boxed;
};

inline std::vector<LanguageClass> enumerate_language_classes(OrderKind order) {
    std::vector<bool> assigned(64, false);
    std::vector<LanguageClass> classes;
    for (int m = 0; m < 64; ++m) {
        if (assigned[m]) continue;
        FeatureSet f(static_cast<std::uint8_t>(m));
        LanguageClass cls;
        for (int k = 0; k < 64; ++k) {
            FeatureSet g(static_cast<std::uint8_t>(k));
            if (leq(order, f, g) && leq(order, g, f)) {
                cls.members.push_back(g);
                assigned[k] = true;
            }
        }
        if (order == OrderKind::Path) {
            cls.canonical = closure_bar(f);
        } else {
            cls.canonical = cls.members.front();
            for (FeatureSet g : cls.members)
                if (g.mask < cls.canonical.mask) cls.canonical = g;
        }
        cls.boxed = cls.members.front();
        for (FeatureSet g : cls.members) {
            if (g.size() < cls.boxed.size() ||
                (g.size() == cls.boxed.size() && g.mask < cls.boxed.mask))
                cls.boxed = g;
        }
        std::sort(cls.members.begin(), cls.members.end(),
                  [](FeatureSet a, FeatureSet b) { return a.mask < b.mask; });
        classes.push_back(std::move(cls));
    }
    std::sort(classes.begin(), classes.end(),
              [](const LanguageClass& a, const LanguageClass& b) {
                  if (a.canonical.size() != b.canonical.size())
                      return a.canonical.size() < b.canonical.size();
                  return a.canonical.mask < b.canonical.mask;
              });
    return classes;
}

/// Transitive reduction of the quotient order. Edges point from the
/// less expressive class to the more expressive one.
struct HasseDiagram {
    OrderKind order;
    std::vector<LanguageClass> nodes;
    std::vector<std::pair<int, int>> edges;
};

inline HasseDiagram hasse(OrderKind order) {
    HasseDiagram d;
    d.order = order;
    d.nodes = enumerate_language_classes(order);
    const int n = static_cast<int>(d.nodes.size());
    auto below = [&](int i, int j) {
        return i != j && leq(order, d.nodes[i].canonical, d.nodes[j].canonical);
    };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!below(i, j)) continue;
            bool covering = true;
            for (int k = 0; k < n && covering; ++k)
                if (below(i, k) && below(k, j)) covering = false;
            if (covering) d.edges.emplace_back(i, j);
        }
    }
    return d;
}

inline std::string class_display_name(const LanguageClass& cls) {
    if (cls.boxed.mask == 0) return "N";
    return "N(" + to_string(cls.boxed) + ")";
}

inline std::string to_dot(const HasseDiagram& d) {
    std::string out = "digraph hasse {\n  rankdir=BT;\n  node [shape=box];\n";
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        const auto& cls = d.nodes[i];
        out += "  n" + std::to_string(i) + " [label=\"" + class_display_name(cls);
        if (cls.members.size() > 1)
            out += "\\n(" + std::to_string(cls.members.size()) + " subsets)";
        out += "\"];\n";
    }
    for (auto [i, j] : d.edges)
        out += "  n" + std::to_string(i) + " -> n" + std::to_string(j) + ";\n";
    out += "}\n";
    return out;
}

inline nlohmann::json to_json(const HasseDiagram& d) {
    auto feature_list = [](FeatureSet fs) {
        nlohmann::json arr = nlohmann::json::array();
        for (Feature f : {kDi, kConv, kPi, kCopi, kCap, kDiff})
            if (fs.has(f)) arr.push_back(feature_name(f));
        return arr;
    };
    nlohmann::json j;
    j["order"] = d.order == OrderKind::Path ? "path" : "bool";
    j["nodes"] = nlohmann::json::array();
    for (const auto& cls : d.nodes) {
        nlohmann::json node;
        node["name"] = class_display_name(cls);
        node["canonical"] = feature_list(cls.canonical);
        node["boxed"] = feature_list(cls.boxed);
        node["members"] = nlohmann::json::array();
        for (FeatureSet m : cls.members) node["members"].push_back(feature_list(m));
        j["nodes"].push_back(node);
    }
    j["edges"] = nlohmann::json::array();
    for (auto [a, b] : d.edges) j["edges"].push_back({a, b});
    return j;
}

} // namespace navalg
