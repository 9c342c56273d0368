#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "navalg/errors.hpp"

namespace navalg {

using NodeId = int;

/// Binary relation over a fixed active domain of `size()` nodes,
/// stored as a row-major bit matrix. All operations stay within the
/// domain; values are immutable in practice (engines always build
/// fresh relations).
class BinaryRelation {
public:
    BinaryRelation() : n_(0), words_per_row_(0) {}

    explicit BinaryRelation(int domain_size)
        : n_(domain_size),
          words_per_row_((domain_size + 63) / 64),
          bits_(static_cast<std::size_t>(domain_size) * words_per_row_, 0) {}

    static BinaryRelation empty(int n) { return BinaryRelation(n); }

    static BinaryRelation identity(int n) {
        BinaryRelation r(n);
        for (int a = 0; a < n; ++a) r.set(a, a);
        return r;
    }

    /// All pairs of distinct domain nodes.
    static BinaryRelation diversity(int n) {
        BinaryRelation r(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b) r.set(a, b);
        return r;
    }

    static BinaryRelation full(int n) {
        BinaryRelation r(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) r.set(a, b);
        return r;
    }

    static BinaryRelation from_pairs(int n,
                                     const std::vector<std::pair<NodeId, NodeId>>& pairs) {
        BinaryRelation r(n);
        for (auto [a, b] : pairs) r.set(a, b);
        return r;
    }

    int size() const { return n_; }

    void set(NodeId a, NodeId b) {
        bits_[static_cast<std::size_t>(a) * words_per_row_ + b / 64] |=
            (std::uint64_t{1} << (b % 64));
    }

    bool test(NodeId a, NodeId b) const {
        return (bits_[static_cast<std::size_t>(a) * words_per_row_ + b / 64] >>
                (b % 64)) & 1;
    }

    bool is_empty() const {
        for (auto w : bits_)
            if (w) return false;
        return true;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : bits_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

    std::vector<std::pair<NodeId, NodeId>> pairs() const {
        std::vector<std::pair<NodeId, NodeId>> out;
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b)
                if (test(a, b)) out.emplace_back(a, b);
        return out;
    }

    friend bool operator==(const BinaryRelation& x, const BinaryRelation& y) {
        return x.n_ == y.n_ && x.bits_ == y.bits_;
    }
    friend bool operator!=(const BinaryRelation& x, const BinaryRelation& y) {
        return !(x == y);
    }

    /// True if every pair of x is also in y (same domain).
    friend bool subset(const BinaryRelation& x, const BinaryRelation& y) {
        for (std::size_t i = 0; i < x.bits_.size(); ++i)
            if (x.bits_[i] & ~y.bits_[i]) return false;
        return true;
    }

    friend BinaryRelation compose(const BinaryRelation& x, const BinaryRelation& y) {
        BinaryRelation out(x.n_);
        for (int a = 0; a < x.n_; ++a) {
            std::size_t row_a = static_cast<std::size_t>(a) * x.words_per_row_;
            for (int wi = 0; wi < x.words_per_row_; ++wi) {
                std::uint64_t w = x.bits_[row_a + wi];
                while (w) {
                    int b = wi * 64 + __builtin_ctzll(w);
                    w &= w - 1;
                    std::size_t row_b = static_cast<std::size_t>(b) * y.words_per_row_;
                    std::size_t row_o = static_cast<std::size_t>(a) * out.words_per_row_;
                    for (int wj = 0; wj < y.words_per_row_; ++wj)
                        out.bits_[row_o + wj] |= y.bits_[row_b + wj];
                }
            }
        }
        return out;
    }

    friend BinaryRelation set_union(const BinaryRelation& x, const BinaryRelation& y) {
        BinaryRelation out = x;
        for (std::size_t i = 0; i < out.bits_.size(); ++i) out.bits_[i] |= y.bits_[i];
        return out;
    }

    friend BinaryRelation set_intersect(const BinaryRelation& x, const BinaryRelation& y) {
        BinaryRelation out = x;
        for (std::size_t i = 0; i < out.bits_.size(); ++i) out.bits_[i] &= y.bits_[i];
        return out;
    }

    friend BinaryRelation set_difference(const BinaryRelation& x, const BinaryRelation& y) {
        BinaryRelation out = x;
        for (std::size_t i = 0; i < out.bits_.size(); ++i) out.bits_[i] &= ~y.bits_[i];
        return out;
    }

    friend BinaryRelation converse(const BinaryRelation& x) {
        BinaryRelation out(x.n_);
        for (int a = 0; a < x.n_; ++a)
            for (int b = 0; b < x.n_; ++b)
                if (x.test(a, b)) out.set(b, a);
        return out;
    }

    /// Self-loops on nodes with an outgoing pair in x.
    friend BinaryRelation proj1(const BinaryRelation& x) {
        BinaryRelation out(x.n_);
        for (int a = 0; a < x.n_; ++a) {
            std::size_t row_a = static_cast<std::size_t>(a) * x.words_per_row_;
            for (int wi = 0; wi < x.words_per_row_; ++wi)
                if (x.bits_[row_a + wi]) { out.set(a, a); break; }
        }
        return out;
    }

    /// Self-loops on nodes with an incoming pair in x.
    friend BinaryRelation proj2(const BinaryRelation& x) {
        BinaryRelation out(x.n_);
        for (int a = 0; a < x.n_; ++a)
            for (int b = 0; b < x.n_; ++b)
                if (x.test(a, b)) { out.set(b, b); }
        return out;
    }

    friend BinaryRelation coproj1(const BinaryRelation& x) {
        return set_difference(identity(x.n_), proj1(x));
    }

    friend BinaryRelation coproj2(const BinaryRelation& x) {
        return set_difference(identity(x.n_), proj2(x));
    }

    std::size_t hash() const {
        std::size_t h = std::hash<int>{}(n_);
        for (auto w : bits_) h = h * 1099511628211ULL + std::hash<std::uint64_t>{}(w);
        return h;
    }

private:
    int n_;
    int words_per_row_;
    std::vector<std::uint64_t> bits_;
};

/// Finite edge-labeled graph. Node tokens are mapped to dense indices
/// 0..n-1 at construction; every indexed node occurs in some edge, so
/// the active domain is exactly the index range. Immutable after
/// construction.
class Graph {
public:
    Graph() = default;

    /// Build from (label, src, dst) token triples. `extra_labels` allows
    /// declaring labels with an empty relation (not reachable through the
    /// file format, useful for constructed instances).
    static Graph from_edges(const std::vector<std::array<std::string, 3>>& triples,
                            const std::vector<std::string>& extra_labels = {}) {
        Graph g;
        for (const auto& t : triples) {
            NodeId s = g.intern_node(t[1]);
            NodeId d = g.intern_node(t[2]);
            g.edges_[t[0]].insert({s, d});
        }
        for (const auto& l : extra_labels) g.edges_[l];
        return g;
    }

    int node_count() const { return static_cast<int>(node_names_.size()); }

    const std::string& node_name(NodeId id) const { return node_names_[id]; }

    NodeId node_id(std::string_view token) const {
        auto it = node_index_.find(std::string(token));
        if (it == node_index_.end())
            throw SchemaError("unknown node token: " + std::string(token));
        return it->second;
    }

    bool has_node(std::string_view token) const {
        return node_index_.count(std::string(token)) != 0;
    }

    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        for (const auto& [l, _] : edges_) out.push_back(l);
        return out;
    }

    bool has_label(const std::string& label) const { return edges_.count(label) != 0; }

    const std::set<std::pair<NodeId, NodeId>>& edges(const std::string& label) const {
        static const std::set<std::pair<NodeId, NodeId>> kEmpty;
        auto it = edges_.find(label);
        return it == edges_.end() ? kEmpty : it->second;
    }

    std::size_t edge_count() const {
        std::size_t c = 0;
        for (const auto& [_, es] : edges_) c += es.size();
        return c;
    }

    /// The active domain: all nodes occurring as source or target of
    /// some edge. By construction this is every dense index.
    std::vector<NodeId> adom() const {
        std::vector<NodeId> out(node_names_.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<NodeId>(i);
        return out;
    }

    int adom_size() const { return node_count(); }

    BinaryRelation relation(const std::string& label) const {
        BinaryRelation r(node_count());
        for (auto [a, b] : edges(label)) r.set(a, b);
        return r;
    }

private:
    NodeId intern_node(const std::string& token) {
        auto [it, inserted] = node_index_.try_emplace(
            token, static_cast<NodeId>(node_names_.size()));
        if (inserted) node_names_.push_back(token);
        return it->second;
    }

    std::vector<std::string> node_names_;
    std::map<std::string, NodeId> node_index_;
    std::map<std::string, std::set<std::pair<NodeId, NodeId>>> edges_;

    friend Graph load_graph(std::string_view);
    friend Graph converse_graph(const Graph&);
};

/// Parse the graph file format: one `<label> <src> <dst>` per line,
/// `#` comment lines, blank lines ignored. Duplicate edges are
/// idempotent. A file with no edge at all has no vocabulary and is
/// rejected.
inline Graph load_graph(std::string_view text) {
    Graph g;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || line[first] == '#') continue;

        std::istringstream iss{std::string(line)};
        std::string label, src, dst, extra;
        if (!(iss >> label >> src >> dst) || (iss >> extra))
            throw ParseError("line " + std::to_string(line_no) +
                                 ": expected '<label> <src> <dst>'",
                             line_no);
        NodeId s = g.intern_node(src);
        NodeId d = g.intern_node(dst);
        g.edges_[label].insert({s, d});
    }
    if (g.edges_.empty())
        throw SchemaError("graph file declares no edge labels");
    return g;
}

/// Canonical rendering: one edge per line sorted by (label, src, dst).
inline std::string render_graph(const Graph& g) {
    std::vector<std::array<std::string, 3>> rows;
    for (const auto& label : g.labels())
        for (auto [a, b] : g.edges(label))
            rows.push_back({label, g.node_name(a), g.node_name(b)});
    std::sort(rows.begin(), rows.end());
    std::string out;
    for (const auto& r : rows) {
        out += r[0];
        out += ' ';
        out += r[1];
        out += ' ';
        out += r[2];
        out += '\n';
    }
    return out;
}

/// Reverse every edge of every label. Active domain is unchanged and
/// node indices are preserved.
inline Graph converse_graph(const Graph& g) {
    std::vector<std::array<std::string, 3>> triples;
    // Keep the original index assignment: intern nodes in index order first.
    for (const auto& label : g.labels())
        for (auto [a, b] : g.edges(label))
            triples.push_back({label, g.node_name(b), g.node_name(a)});
    Graph out;
    for (NodeId i = 0; i < g.node_count(); ++i) out.intern_node(g.node_name(i));
    for (const auto& t : triples) {
        NodeId s = out.intern_node(t[1]);
        NodeId d = out.intern_node(t[2]);
        out.edges_[t[0]].insert({s, d});
    }
    for (const auto& l : g.labels()) out.edges_[l];
    return out;
}

/// Graph equality up to node renaming, via canonical rendering of the
/// token-level edge lists.
inline bool same_graph(const Graph& a, const Graph& b) {
    return render_graph(a) == render_graph(b);
}

/// A graph with two marked active-domain nodes.
struct MarkedGraph {
    const Graph* graph;
    NodeId a;
    NodeId b;

    MarkedGraph(const Graph& g, NodeId a_, NodeId b_) : graph(&g), a(a_), b(b_) {
        if (a_ < 0 || a_ >= g.adom_size() || b_ < 0 || b_ >= g.adom_size())
            throw SchemaError("marked nodes must lie in the active domain");
    }
};

} // namespace navalg
