#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "navalg/evaluate.hpp"
#include "navalg/expr.hpp"
#include "navalg/graph.hpp"
#include "navalg/rel64.hpp"

namespace navalg {

// ---------------------------------------------------------------------------
// Brute-force pairwise closure
// ---------------------------------------------------------------------------

/// A pair of result relations, one per graph, reachable by some
/// expression of the profiled fragment.
struct RelationPair {
    BinaryRelation r1;
    BinaryRelation r2;
};

struct ClosureOptions {
    bool with_witnesses = false;
    bool keep_pairs = false;
    /// Stop as soon as a distinguishing pair appears.
    bool early_stop = false;
    std::uint64_t budget = 5'000'000;
};

struct ClosureResult {
    bool distinguishable = false;
    std::optional<ExprPtr> witness;
    std::uint64_t pair_count = 0;
    /// Filled when keep_pairs; parallel to `witnesses` when both requested.
    std::vector<RelationPair> pairs;
    std::vector<ExprPtr> witnesses;
};

namespace detail {

/// Open-addressed hash table mapping pair hashes to member indices.
class PairIndex {
public:
    explicit PairIndex(std::size_t initial = 1 << 12)
        : slots_(initial, -1), mask_(initial - 1) {}

    template <class EqualAt>
    int find(std::uint64_t hash, EqualAt equal_at) const {
        std::size_t i = hash & mask_;
        while (slots_[i] != -1) {
            if (equal_at(slots_[i])) return slots_[i];
            i = (i + 1) & mask_;
        }
        return -1;
    }

    void insert(std::uint64_t hash, int value, std::size_t population) {
        if ((population + 1) * 10 >= slots_.size() * 7) grow();
        std::size_t i = hash & mask_;
        while (slots_[i] != -1) i = (i + 1) & mask_;
        slots_[i] = value;
        hashes_.push_back(hash);
    }

private:
    void grow() {
        // Values are the consecutive indices 0..N-1 in insertion order,
        // recorded hash-for-hash in hashes_; rebuild from that order.
        std::vector<std::uint64_t> hashes = std::move(hashes_);
        slots_.assign(slots_.size() * 2, -1);
        mask_ = slots_.size() - 1;
        hashes_.clear();
        hashes_.reserve(hashes.size() * 2);
        int value = 0;
        for (std::uint64_t h : hashes) {
            std::size_t i = h & mask_;
            while (slots_[i] != -1) i = (i + 1) & mask_;
            slots_[i] = value++;
            hashes_.push_back(h);
        }
    }

    std::vector<int> slots_;
    std::size_t mask_;
    std::vector<std::uint64_t> hashes_;
};

inline std::uint64_t small_pair_hash(rel64::Rel a, rel64::Rel b) {
    return rel64::splitmix64(a) ^
           (rel64::splitmix64(b ^ 0x5bf03635ULL) * 0x9E3779B97F4A7C15ULL);
}

/// Relations over domains of up to 64 nodes, bit-packed row-major into
/// ceil(n*n/64) words (row a occupies bits [a*n, (a+1)*n)). The closure
/// engine stores pairs in one flat arena in this format and unpacks
/// rows on demand. Tail bits beyond n*n stay zero.
struct PackedOps {
    int n;
    int words;

    explicit PackedOps(int domain) : n(domain), words((domain * domain + 63) / 64) {
        if (domain > 64)
            throw EvalError("brute-force closure supports at most 64 nodes per graph");
    }

    std::uint64_t row_mask() const {
        return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    }

    std::uint64_t get_row(const std::uint64_t* w, int a) const {
        int bit = a * n;
        int wi = bit / 64, off = bit % 64;
        std::uint64_t out = w[wi] >> off;
        if (off && wi + 1 < words) out |= w[wi + 1] << (64 - off);
        return out & row_mask();
    }

    void set_row(std::uint64_t* w, int a, std::uint64_t row) const {
        int bit = a * n;
        int wi = bit / 64, off = bit % 64;
        w[wi] |= row << off;
        if (off && off + n > 64) w[wi + 1] |= row >> (64 - off);
    }

    void clear(std::uint64_t* w) const {
        for (int i = 0; i < words; ++i) w[i] = 0;
    }

    bool is_empty(const std::uint64_t* w) const {
        for (int i = 0; i < words; ++i)
            if (w[i]) return false;
        return true;
    }

    void compose(const std::uint64_t* x, const std::uint64_t* y,
                 std::uint64_t* out) const {
        clear(out);
        for (int a = 0; a < n; ++a) {
            std::uint64_t r = get_row(x, a);
            if (!r) continue;
            std::uint64_t acc = 0;
            while (r) {
                int b = __builtin_ctzll(r);
                r &= r - 1;
                acc |= get_row(y, b);
            }
            if (acc) set_row(out, a, acc);
        }
    }

    void converse(const std::uint64_t* x, std::uint64_t* out) const {
        clear(out);
        for (int a = 0; a < n; ++a) {
            std::uint64_t r = get_row(x, a);
            while (r) {
                int b = __builtin_ctzll(r);
                r &= r - 1;
                std::uint64_t row = std::uint64_t{1} << a;
                set_row(out, b, row); // set_row ORs, safe for repeated b
            }
        }
    }

    void proj1(const std::uint64_t* x, std::uint64_t* out) const {
        clear(out);
        for (int a = 0; a < n; ++a)
            if (get_row(x, a)) set_row(out, a, std::uint64_t{1} << a);
    }

    void proj2(const std::uint64_t* x, std::uint64_t* out) const {
        std::uint64_t cols = 0;
        for (int a = 0; a < n; ++a) cols |= get_row(x, a);
        clear(out);
        for (int b = 0; b < n; ++b)
            if (cols & (std::uint64_t{1} << b)) set_row(out, b, std::uint64_t{1} << b);
    }

    void coproj1(const std::uint64_t* x, std::uint64_t* out) const {
        clear(out);
        for (int a = 0; a < n; ++a)
            if (!get_row(x, a)) set_row(out, a, std::uint64_t{1} << a);
    }

    void coproj2(const std::uint64_t* x, std::uint64_t* out) const {
        std::uint64_t cols = 0;
        for (int a = 0; a < n; ++a) cols |= get_row(x, a);
        clear(out);
        for (int b = 0; b < n; ++b)
            if (!(cols & (std::uint64_t{1} << b)))
                set_row(out, b, std::uint64_t{1} << b);
    }

    void from_relation(const BinaryRelation& r, std::uint64_t* out) const {
        clear(out);
        for (int a = 0; a < n; ++a) {
            std::uint64_t row = 0;
            for (int b = 0; b < n; ++b)
                if (r.test(a, b)) row |= std::uint64_t{1} << b;
            if (row) set_row(out, a, row);
        }
    }

    BinaryRelation to_relation(const std::uint64_t* w) const {
        BinaryRelation r(n);
        for (int a = 0; a < n; ++a) {
            std::uint64_t row = get_row(w, a);
            while (row) {
                int b = __builtin_ctzll(row);
                row &= row - 1;
                r.set(a, b);
            }
        }
        return r;
    }

    std::uint64_t hash(const std::uint64_t* w, std::uint64_t salt) const {
        std::uint64_t h = salt;
        for (int i = 0; i < words; ++i)
            h = rel64::splitmix64(h ^ w[i]) * 0x9E3779B97F4A7C15ULL;
        return h;
    }
};

} // namespace detail

/// The pairwise brute-force closure: starting from the seeds
/// {(id,id)} u {(di,di) if di in profile} u {(0,0)} u {(G1(R),G2(R))},
/// close under every profiled operator applied component-wise (binary
/// operators in both argument orders). The verdict is "distinguishable"
/// exactly when some reachable pair has one empty and one nonempty
/// component. Exceeding the budget raises BudgetExceededError; there is
/// never a silent partial verdict.
///
/// Deterministic: FIFO worklist, so witness expressions are minimal in
/// discovery order.
inline ClosureResult brute_force_closure(const Graph& g1, const Graph& g2,
                                         const OperatorProfile& profile,
                                         const ClosureOptions& opt = {}) {
    const int n1 = g1.adom_size();
    const int n2 = g2.adom_size();

    // Shared vocabulary: union of both label sets, deterministic order.
    std::set<std::string> labels;
    for (const auto& l : g1.labels()) labels.insert(l);
    for (const auto& l : g2.labels()) labels.insert(l);

    ClosureResult result;
    std::vector<ExprPtr> witnesses;
    detail::PairIndex index;
    int found_at = -1;

    const bool small = n1 <= rel64::kMaxDomain && n2 <= rel64::kMaxDomain;

    if (small) {
        // One word per relation; byte a is row a.
        std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
        auto add = [&](std::uint64_t a, std::uint64_t b, const ExprPtr& w) {
            std::uint64_t h = detail::small_pair_hash(a, b);
            int existing = index.find(h, [&](int i) {
                return pairs[i].first == a && pairs[i].second == b;
            });
            if (existing != -1) return;
            if (pairs.size() >= opt.budget)
                throw BudgetExceededError(
                    "brute-force closure exceeded the pair budget of " +
                        std::to_string(opt.budget),
                    pairs.size());
            index.insert(h, static_cast<int>(pairs.size()), pairs.size());
            pairs.emplace_back(a, b);
            if (opt.with_witnesses) witnesses.push_back(w);
            if (found_at < 0 && ((a == 0) != (b == 0))) {
                found_at = static_cast<int>(pairs.size()) - 1;
                result.distinguishable = true;
                if (w) result.witness = w;
            }
        };

        add(rel64::identity(n1), rel64::identity(n2), mk_id());
        if (profile.di) add(rel64::diversity(n1), rel64::diversity(n2), mk_di());
        add(0, 0, mk_empty());
        for (const auto& l : labels)
            add(rel64::from_relation(g1.relation(l)),
                rel64::from_relation(g2.relation(l)), mk_label(l));

        auto wit = [&](std::size_t i) -> ExprPtr {
            return opt.with_witnesses ? witnesses[i] : nullptr;
        };
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (opt.early_stop && result.distinguishable) break;
            auto [a, b] = pairs[i];
            ExprPtr wi = wit(i);
            if (profile.conv)
                add(rel64::transpose(a), rel64::transpose(b),
                    wi ? mk_converse(wi) : nullptr);
            if (profile.pi1)
                add(rel64::proj1(a, n1), rel64::proj1(b, n2), wi ? mk_proj1(wi) : nullptr);
            if (profile.pi2)
                add(rel64::proj2(a, n1), rel64::proj2(b, n2), wi ? mk_proj2(wi) : nullptr);
            if (profile.copi1)
                add(rel64::coproj1(a, n1), rel64::coproj1(b, n2),
                    wi ? mk_coproj1(wi) : nullptr);
            if (profile.copi2)
                add(rel64::coproj2(a, n1), rel64::coproj2(b, n2),
                    wi ? mk_coproj2(wi) : nullptr);
            for (std::size_t j = 0; j <= i; ++j) {
                if (opt.early_stop && result.distinguishable) break;
                auto [c, d] = pairs[j];
                ExprPtr wj = wit(j);
                bool have_w = opt.with_witnesses;
                add(rel64::compose(a, c, n1), rel64::compose(b, d, n2),
                    have_w ? mk_compose(wi, wj) : nullptr);
                add(a | c, b | d, have_w ? mk_union(wi, wj) : nullptr);
                if (j != i)
                    add(rel64::compose(c, a, n1), rel64::compose(d, b, n2),
                        have_w ? mk_compose(wj, wi) : nullptr);
                if (profile.cap)
                    add(a & c, b & d, have_w ? mk_intersect(wi, wj) : nullptr);
                if (profile.diff) {
                    add(a & ~c, b & ~d, have_w ? mk_diff(wi, wj) : nullptr);
                    if (j != i) add(c & ~a, d & ~b, have_w ? mk_diff(wj, wi) : nullptr);
                }
            }
        }

        result.pair_count = pairs.size();
        if (opt.keep_pairs) {
            result.pairs.reserve(pairs.size());
            for (auto [a, b] : pairs)
                result.pairs.push_back(
                    {rel64::to_relation(a, n1), rel64::to_relation(b, n2)});
            if (opt.with_witnesses) result.witnesses = witnesses;
        }
        return result;
    }

    // General path: pairs bit-packed into one flat arena.
    detail::PackedOps ops1(n1), ops2(n2);
    const int w1 = ops1.words, w2 = ops2.words;
    const int stride = w1 + w2;
    std::vector<std::uint64_t> arena;
    std::size_t count = 0;

    std::vector<std::uint64_t> scratch(stride);
    std::uint64_t* s1 = scratch.data();
    std::uint64_t* s2 = scratch.data() + w1;

    auto slice1 = [&](std::size_t i) { return arena.data() + i * stride; };
    auto slice2 = [&](std::size_t i) { return arena.data() + i * stride + w1; };

    auto pair_hash = [&](const std::uint64_t* a, const std::uint64_t* b) {
        return ops2.hash(b, ops1.hash(a, 0x243F6A8885A308D3ULL));
    };

    // Adds the pair currently held in scratch.
    auto add_scratch = [&](const ExprPtr& w) {
        std::uint64_t h = pair_hash(s1, s2);
        int existing = index.find(h, [&](int i) {
            const std::uint64_t* base = arena.data() + static_cast<std::size_t>(i) * stride;
            for (int k = 0; k < stride; ++k)
                if (base[k] != scratch[k]) return false;
            return true;
        });
        if (existing != -1) return;
        if (count >= opt.budget)
            throw BudgetExceededError(
                "brute-force closure exceeded the pair budget of " +
                    std::to_string(opt.budget),
                count);
        index.insert(h, static_cast<int>(count), count);
        arena.insert(arena.end(), scratch.begin(), scratch.end());
        ++count;
        if (opt.with_witnesses) witnesses.push_back(w);
        if (found_at < 0 && (ops1.is_empty(s1) != ops2.is_empty(s2))) {
            found_at = static_cast<int>(count) - 1;
            result.distinguishable = true;
            if (w) result.witness = w;
        }
    };

    ops1.from_relation(BinaryRelation::identity(n1), s1);
    ops2.from_relation(BinaryRelation::identity(n2), s2);
    add_scratch(mk_id());
    if (profile.di) {
        ops1.from_relation(BinaryRelation::diversity(n1), s1);
        ops2.from_relation(BinaryRelation::diversity(n2), s2);
        add_scratch(mk_di());
    }
    ops1.clear(s1);
    ops2.clear(s2);
    add_scratch(mk_empty());
    for (const auto& l : labels) {
        ops1.from_relation(g1.relation(l), s1);
        ops2.from_relation(g2.relation(l), s2);
        add_scratch(mk_label(l));
    }

    auto wit = [&](std::size_t i) -> ExprPtr {
        return opt.with_witnesses ? witnesses[i] : nullptr;
    };
    std::vector<std::uint64_t> copy_i(stride);
    std::vector<std::uint64_t> copy_j(stride);
    for (std::size_t i = 0; i < count; ++i) {
        if (opt.early_stop && result.distinguishable) break;
        // arena may reallocate while iterating; work on copies
        std::copy(slice1(i), slice1(i) + stride, copy_i.data());
        const std::uint64_t* a = copy_i.data();
        const std::uint64_t* b = copy_i.data() + w1;
        ExprPtr wi = wit(i);
        if (profile.conv) {
            ops1.converse(a, s1);
            ops2.converse(b, s2);
            add_scratch(wi ? mk_converse(wi) : nullptr);
        }
        if (profile.pi1) {
            ops1.proj1(a, s1);
            ops2.proj1(b, s2);
            add_scratch(wi ? mk_proj1(wi) : nullptr);
        }
        if (profile.pi2) {
            ops1.proj2(a, s1);
            ops2.proj2(b, s2);
            add_scratch(wi ? mk_proj2(wi) : nullptr);
        }
        if (profile.copi1) {
            ops1.coproj1(a, s1);
            ops2.coproj1(b, s2);
            add_scratch(wi ? mk_coproj1(wi) : nullptr);
        }
        if (profile.copi2) {
            ops1.coproj2(a, s1);
            ops2.coproj2(b, s2);
            add_scratch(wi ? mk_coproj2(wi) : nullptr);
        }
        for (std::size_t j = 0; j <= i; ++j) {
            if (opt.early_stop && result.distinguishable) break;
            std::copy(slice1(j), slice1(j) + stride, copy_j.data());
            const std::uint64_t* c = copy_j.data();
            const std::uint64_t* d = copy_j.data() + w1;
            ExprPtr wj = wit(j);
            bool have_w = opt.with_witnesses;
            ops1.compose(a, c, s1);
            ops2.compose(b, d, s2);
            add_scratch(have_w ? mk_compose(wi, wj) : nullptr);
            for (int k = 0; k < w1; ++k) s1[k] = a[k] | c[k];
            for (int k = 0; k < w2; ++k) s2[k] = b[k] | d[k];
            add_scratch(have_w ? mk_union(wi, wj) : nullptr);
            if (j != i) {
                ops1.compose(c, a, s1);
                ops2.compose(d, b, s2);
                add_scratch(have_w ? mk_compose(wj, wi) : nullptr);
            }
            if (profile.cap) {
                for (int k = 0; k < w1; ++k) s1[k] = a[k] & c[k];
                for (int k = 0; k < w2; ++k) s2[k] = b[k] & d[k];
                add_scratch(have_w ? mk_intersect(wi, wj) : nullptr);
            }
            if (profile.diff) {
                for (int k = 0; k < w1; ++k) s1[k] = a[k] & ~c[k];
                for (int k = 0; k < w2; ++k) s2[k] = b[k] & ~d[k];
                add_scratch(have_w ? mk_diff(wi, wj) : nullptr);
                if (j != i) {
                    for (int k = 0; k < w1; ++k) s1[k] = c[k] & ~a[k];
                    for (int k = 0; k < w2; ++k) s2[k] = d[k] & ~b[k];
                    add_scratch(have_w ? mk_diff(wj, wi) : nullptr);
                }
            }
        }
    }

    result.pair_count = count;
    if (opt.keep_pairs) {
        result.pairs.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
            result.pairs.push_back({ops1.to_relation(slice1(i)), ops2.to_relation(slice2(i))});
        if (opt.with_witnesses) result.witnesses = witnesses;
    }
    return result;
}

/// Definite distinguishability verdict with a minimal witness in
/// discovery order. Budget overruns raise; they never turn into a
/// "false".
struct Distinguishability {
    bool distinguishable;
    std::optional<ExprPtr> witness;
};

inline Distinguishability distinguishable(const Graph& g1, const Graph& g2,
                                          const OperatorProfile& profile,
                                          std::uint64_t budget = 5'000'000) {
    ClosureOptions opt;
    opt.with_witnesses = true;
    opt.early_stop = true;
    opt.budget = budget;
    ClosureResult r = brute_force_closure(g1, g2, profile, opt);
    return {r.distinguishable, r.witness};
}

// ---------------------------------------------------------------------------
// Bisimulation (arrow-logic style, for the difference/diversity fragment)
// ---------------------------------------------------------------------------

/// Quadruple relation between marked pairs of two graphs, either at a
/// finite refinement depth or at the greatest fixpoint.
struct BisimRelation {
    int n1 = 0;
    int n2 = 0;
    std::optional<int> depth; // nullopt: stabilized fixpoint
    int rounds = 0;           // refinement rounds actually performed
    int words2 = 0;
    std::vector<std::uint64_t> bits; // cell (a1*n1+b1) -> bitset over n2*n2

    bool related(NodeId a1, NodeId b1, NodeId a2, NodeId b2) const {
        std::size_t cell = static_cast<std::size_t>(a1) * n1 + b1;
        int p2 = a2 * n2 + b2;
        return (bits[cell * words2 + p2 / 64] >> (p2 % 64)) & 1;
    }

    bool cell_nonempty(NodeId a1, NodeId b1) const {
        std::size_t cell = static_cast<std::size_t>(a1) * n1 + b1;
        for (int w = 0; w < words2; ++w)
            if (bits[cell * words2 + w]) return true;
        return false;
    }
};

namespace detail {

inline BisimRelation bisim_refine(const Graph& g1, const Graph& g2,
                                  std::optional<int> max_depth) {
    BisimRelation s;
    s.n1 = g1.adom_size();
    s.n2 = g2.adom_size();
    s.words2 = (s.n1 == 0 || s.n2 == 0) ? 1 : (s.n2 * s.n2 + 63) / 64;
    const int cells = s.n1 * s.n1;
    s.bits.assign(static_cast<std::size_t>(std::max(cells, 1)) * s.words2, 0);

    // Atoms: equality pattern and per-label edge pattern agree.
    std::set<std::string> labels;
    for (const auto& l : g1.labels()) labels.insert(l);
    for (const auto& l : g2.labels()) labels.insert(l);
    std::vector<BinaryRelation> r1, r2;
    for (const auto& l : labels) {
        r1.push_back(g1.relation(l));
        r2.push_back(g2.relation(l));
    }
    for (int a1 = 0; a1 < s.n1; ++a1)
        for (int b1 = 0; b1 < s.n1; ++b1) {
            std::size_t cell = static_cast<std::size_t>(a1) * s.n1 + b1;
            for (int a2 = 0; a2 < s.n2; ++a2)
                for (int b2 = 0; b2 < s.n2; ++b2) {
                    if ((a1 == b1) != (a2 == b2)) continue;
                    bool ok = true;
                    for (std::size_t l = 0; l < r1.size() && ok; ++l)
                        if (r1[l].test(a1, b1) != r2[l].test(a2, b2)) ok = false;
                    if (!ok) continue;
                    int p2 = a2 * s.n2 + b2;
                    s.bits[cell * s.words2 + p2 / 64] |= std::uint64_t{1} << (p2 % 64);
                }
        }

    auto related = [&](const std::vector<std::uint64_t>& bits, int a1, int b1, int a2,
                       int b2) {
        std::size_t cell = static_cast<std::size_t>(a1) * s.n1 + b1;
        int p2 = a2 * s.n2 + b2;
        return (bits[cell * s.words2 + p2 / 64] >> (p2 % 64)) & 1;
    };

    int round = 0;
    while (!max_depth || round < *max_depth) {
        std::vector<std::uint64_t> next = s.bits;
        bool changed = false;
        for (int a1 = 0; a1 < s.n1; ++a1)
            for (int b1 = 0; b1 < s.n1; ++b1) {
                std::size_t cell = static_cast<std::size_t>(a1) * s.n1 + b1;
                for (int a2 = 0; a2 < s.n2; ++a2)
                    for (int b2 = 0; b2 < s.n2; ++b2) {
                        if (!related(s.bits, a1, b1, a2, b2)) continue;
                        bool ok = true;
                        // Forth: every split point c1 has a counterpart c2.
                        for (int c1 = 0; c1 < s.n1 && ok; ++c1) {
                            bool ex = false;
                            for (int c2 = 0; c2 < s.n2 && !ex; ++c2)
                                if (related(s.bits, a1, c1, a2, c2) &&
                                    related(s.bits, c1, b1, c2, b2))
                                    ex = true;
                            ok = ex;
                        }
                        // Back: every c2 has a counterpart c1.
                        for (int c2 = 0; c2 < s.n2 && ok; ++c2) {
                            bool ex = false;
                            for (int c1 = 0; c1 < s.n1 && !ex; ++c1)
                                if (related(s.bits, a1, c1, a2, c2) &&
                                    related(s.bits, c1, b1, c2, b2))
                                    ex = true;
                            ok = ex;
                        }
                        if (!ok) {
                            int p2 = a2 * s.n2 + b2;
                            next[cell * s.words2 + p2 / 64] &=
                                ~(std::uint64_t{1} << (p2 % 64));
                            changed = true;
                        }
                    }
            }
        ++round;
        s.bits = std::move(next);
        if (!changed) break; // stable: deeper refinement cannot change it
    }
    s.rounds = round;
    s.depth = max_depth;
    return s;
}

} // namespace detail

/// Quadruple relation after k refinement rounds: exactly the pairs
/// bisimilar up to depth k.
inline BisimRelation bisim_at_depth(const Graph& g1, const Graph& g2, int k) {
    return detail::bisim_refine(g1, g2, k);
}

/// Greatest fixpoint: quadruples related at every finite depth.
inline BisimRelation bisim_fixpoint(const Graph& g1, const Graph& g2) {
    return detail::bisim_refine(g1, g2, std::nullopt);
}

/// (G1,a1,b1) bisimilar to (G2,a2,b2) up to depth k.
inline bool bisimilar_k(const MarkedGraph& m1, const MarkedGraph& m2, int k) {
    BisimRelation s = bisim_at_depth(*m1.graph, *m2.graph, k);
    return s.related(m1.a, m1.b, m2.a, m2.b);
}

/// Sufficient condition for nonexpressibility in the
/// difference/diversity fragment at every degree: each marked pair of
/// G1 has a counterpart in G2 bisimilar at the fixpoint. (Certifies the
/// G1-true/G2-false direction only.)
inline bool check_nonexpressibility_condition(const Graph& g1, const Graph& g2) {
    BisimRelation s = bisim_fixpoint(g1, g2);
    for (int a1 = 0; a1 < s.n1; ++a1)
        for (int b1 = 0; b1 < s.n1; ++b1)
            if (!s.cell_nonempty(a1, b1)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Exhaustive expression enumeration
// ---------------------------------------------------------------------------

/// Enumerates all expressions of the profiled fragment within size and
/// degree bounds, as a pool where entries reference earlier entries.
/// Union and intersection arguments are ordered to avoid duplicates
/// under commutativity.
class ExpressionEnumerator {
public:
    struct Entry {
        Op op;
        int lhs = -1;
        int rhs = -1;
        int label = -1;
        int size = 0;
        int degree = 0;
    };

    ExpressionEnumerator(const OperatorProfile& profile,
                         std::vector<std::string> labels, int max_size,
                         int max_degree)
        : labels_(std::move(labels)) {
        size_first_.assign(max_size + 2, 0);
        for (int li = 0; li < static_cast<int>(labels_.size()); ++li)
            entries_.push_back({Op::Label, -1, -1, li, 1, 0});
        entries_.push_back({Op::Id, -1, -1, -1, 1, 0});
        entries_.push_back({Op::Empty, -1, -1, -1, 1, 0});
        if (profile.di) entries_.push_back({Op::Di, -1, -1, -1, 1, 0});
        size_first_[1] = 0;
        size_first_[2] = static_cast<int>(entries_.size());

        for (int s = 2; s <= max_size; ++s) {
            for (int i = size_first_[s - 1]; i < size_first_[s]; ++i) {
                const Entry c = entries_[i];
                auto push_unary = [&](Op op, int degree) {
                    if (degree > max_degree) return;
                    entries_.push_back({op, i, -1, -1, s, degree});
                };
                if (profile.conv) push_unary(Op::Converse, c.degree);
                if (profile.pi1) push_unary(Op::Proj1, c.degree + 1);
                if (profile.pi2) push_unary(Op::Proj2, c.degree + 1);
                if (profile.copi1) push_unary(Op::Coproj1, c.degree + 1);
                if (profile.copi2) push_unary(Op::Coproj2, c.degree + 1);
            }
            for (int ls = 1; ls <= s - 2; ++ls) {
                int rs = s - 1 - ls;
                for (int i = size_first_[ls]; i < size_first_[ls + 1]; ++i) {
                    for (int j = size_first_[rs]; j < size_first_[rs + 1]; ++j) {
                        int dmax = std::max(entries_[i].degree, entries_[j].degree);
                        if (1 + dmax <= max_degree)
                            entries_.push_back({Op::Compose, i, j, -1, s, 1 + dmax});
                        if (dmax <= max_degree) {
                            if (ls < rs || (ls == rs && i <= j))
                                entries_.push_back({Op::Union, i, j, -1, s, dmax});
                            if (profile.cap && (ls < rs || (ls == rs && i <= j)))
                                entries_.push_back({Op::Intersect, i, j, -1, s, dmax});
                            if (profile.diff)
                                entries_.push_back({Op::Diff, i, j, -1, s, dmax});
                        }
                    }
                }
            }
            size_first_[s + 1] = static_cast<int>(entries_.size());
        }
    }

    std::size_t count() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }
    const std::vector<std::string>& labels() const { return labels_; }

    ExprPtr expr(std::size_t i) const {
        if (cache_.size() != entries_.size()) cache_.assign(entries_.size(), nullptr);
        if (cache_[i]) return cache_[i];
        const Entry& e = entries_[i];
        ExprPtr out;
        switch (e.op) {
            case Op::Label: out = mk_label(labels_[e.label]); break;
            case Op::Id: out = mk_id(); break;
            case Op::Empty: out = mk_empty(); break;
            case Op::Di: out = mk_di(); break;
            case Op::Converse: out = mk_converse(expr(e.lhs)); break;
            case Op::Proj1: out = mk_proj1(expr(e.lhs)); break;
            case Op::Proj2: out = mk_proj2(expr(e.lhs)); break;
            case Op::Coproj1: out = mk_coproj1(expr(e.lhs)); break;
            case Op::Coproj2: out = mk_coproj2(expr(e.lhs)); break;
            case Op::Compose: out = mk_compose(expr(e.lhs), expr(e.rhs)); break;
            case Op::Union: out = mk_union(expr(e.lhs), expr(e.rhs)); break;
            case Op::Intersect: out = mk_intersect(expr(e.lhs), expr(e.rhs)); break;
            case Op::Diff: out = mk_diff(expr(e.lhs), expr(e.rhs)); break;
        }
        cache_[i] = out;
        return out;
    }

private:
    std::vector<std::string> labels_;
    std::vector<Entry> entries_;
    std::vector<int> size_first_;
    mutable std::vector<ExprPtr> cache_;
};

/// Evaluate every enumerated expression on g (adom <= 8) in one pass.
inline std::vector<rel64::Rel> evaluate_pool(const ExpressionEnumerator& en,
                                             const Graph& g) {
    const int n = g.adom_size();
    if (n > rel64::kMaxDomain)
        throw EvalError("pool evaluation requires an active domain of at most 8");
    std::vector<rel64::Rel> label_rel;
    for (const auto& l : en.labels())
        label_rel.push_back(rel64::from_relation(g.relation(l)));
    std::vector<rel64::Rel> out(en.count());
    const auto& entries = en.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        switch (e.op) {
            case Op::Label: out[i] = label_rel[e.label]; break;
            case Op::Id: out[i] = rel64::identity(n); break;
            case Op::Empty: out[i] = 0; break;
            case Op::Di: out[i] = rel64::diversity(n); break;
            case Op::Converse: out[i] = rel64::transpose(out[e.lhs]); break;
            case Op::Proj1: out[i] = rel64::proj1(out[e.lhs], n); break;
            case Op::Proj2: out[i] = rel64::proj2(out[e.lhs], n); break;
            case Op::Coproj1: out[i] = rel64::coproj1(out[e.lhs], n); break;
            case Op::Coproj2: out[i] = rel64::coproj2(out[e.lhs], n); break;
            case Op::Compose: out[i] = rel64::compose(out[e.lhs], out[e.rhs], n); break;
            case Op::Union: out[i] = out[e.lhs] | out[e.rhs]; break;
            case Op::Intersect: out[i] = out[e.lhs] & out[e.rhs]; break;
            case Op::Diff: out[i] = out[e.lhs] & ~out[e.rhs]; break;
        }
    }
    return out;
}

} // namespace navalg
