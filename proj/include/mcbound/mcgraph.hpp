#pragma once

// Monotonicity-constraint graphs: a conjunction of order relations between the
// variables of a source flow point and (primed) variables of a target flow point.
//
// A graph with s source and t target variables has s + t nodes; source variable
// i (1-based) is node i-1, target variable j is node s+j-1. For every node u we
// keep two bit rows: ge(u) has bit v set when u >= v is recorded, gt(u) when
// u > v is recorded. gt is always a subset of ge, so a strict arc subsumes a
// parallel non-strict one. Equality is the arc pair {u >= v, v >= u}.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcbound/errors.hpp"

namespace mcbound {

using PointId = std::uint32_t;

enum class Strictness : std::uint8_t { NonStrict, Strict };

/// STRICT absorbs anything; NONSTRICT;NONSTRICT stays NONSTRICT.
constexpr Strictness then(Strictness a, Strictness b) noexcept {
    return (a == Strictness::Strict || b == Strictness::Strict) ? Strictness::Strict : Strictness::NonStrict;
}

enum class Side : std::uint8_t { Source, Target };

struct VarNode {
    Side side = Side::Source;
    int index = 1;  // 1-based

    friend bool operator==(const VarNode&, const VarNode&) = default;
    friend auto operator<=>(const VarNode&, const VarNode&) = default;
};

constexpr VarNode src(int i) noexcept { return {Side::Source, i}; }
constexpr VarNode tgt(int i) noexcept { return {Side::Target, i}; }

struct Arc {
    VarNode from;
    VarNode to;
    Strictness strictness;

    friend bool operator==(const Arc&, const Arc&) = default;
};

inline constexpr int kMaxNodes = 64;

namespace detail {

inline constexpr std::uint64_t bit(int i) noexcept { return std::uint64_t{1} << i; }

inline constexpr std::uint64_t low_mask(int n) noexcept {
    return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

// Warshall over the {none, >=, >} path algebra.
inline void close_rows(std::uint64_t* ge, std::uint64_t* gt, int n) noexcept {
    for (int k = 0; k < n; ++k) {
        const std::uint64_t kb = bit(k);
        const std::uint64_t gek = ge[k];
        const std::uint64_t gtk = gt[k];
        for (int i = 0; i < n; ++i) {
            if (!(ge[i] & kb)) continue;
            ge[i] |= gek;
            gt[i] |= gtk;
            if (gt[i] & kb) gt[i] |= gek;
        }
    }
    // u >= u carries no information; only a strict self loop (a contradiction) is kept.
    for (int i = 0; i < n; ++i) {
        if (!(gt[i] & bit(i))) ge[i] &= ~bit(i);
    }
}

}  // namespace detail

class McGraph {
public:
    McGraph() = default;

    McGraph(PointId source, PointId target, int sourceArity, int targetArity)
        : source_(source), target_(target), sourceArity_(sourceArity), targetArity_(targetArity) {
        if (sourceArity < 0 || targetArity < 0 || sourceArity + targetArity > kMaxNodes) {
            throw ArityMismatch("monotonicity constraint supports at most " + std::to_string(kMaxNodes) + " nodes");
        }
        rows_.assign(2 * static_cast<std::size_t>(sourceArity + targetArity), 0);
    }

    PointId source() const noexcept { return source_; }
    PointId target() const noexcept { return target_; }
    int source_arity() const noexcept { return sourceArity_; }
    int target_arity() const noexcept { return targetArity_; }
    int node_count() const noexcept { return sourceArity_ + targetArity_; }

    int node(VarNode v) const {
        const int arity = v.side == Side::Source ? sourceArity_ : targetArity_;
        if (v.index < 1 || v.index > arity) {
            throw UnknownVariable("variable index " + std::to_string(v.index) + " outside arity " +
                                  std::to_string(arity));
        }
        return v.side == Side::Source ? v.index - 1 : sourceArity_ + v.index - 1;
    }

    VarNode var(int node) const noexcept {
        return node < sourceArity_ ? src(node + 1) : tgt(node - sourceArity_ + 1);
    }

    void add(VarNode from, VarNode to, Strictness s) { add_nodes(node(from), node(to), s); }

    void add_nodes(int u, int v, Strictness s) noexcept {
        if (u == v && s == Strictness::NonStrict) return;
        ge_row(u) |= detail::bit(v);
        if (s == Strictness::Strict) gt_row(u) |= detail::bit(v);
    }

    /// Adds both arcs of an equality.
    void add_equal(VarNode a, VarNode b) {
        add(a, b, Strictness::NonStrict);
        add(b, a, Strictness::NonStrict);
    }

    std::optional<Strictness> node_relation(int u, int v) const noexcept {
        if (gt_row(u) & detail::bit(v)) return Strictness::Strict;
        if (ge_row(u) & detail::bit(v)) return Strictness::NonStrict;
        return std::nullopt;
    }

    /// The recorded relation `from ≻ to`, if any.
    std::optional<Strictness> relation(VarNode from, VarNode to) const { return node_relation(node(from), node(to)); }

    bool related(VarNode a, VarNode b) const { return relation(a, b) || relation(b, a); }

    std::uint64_t ge_row(int u) const noexcept { return rows_[static_cast<std::size_t>(u)]; }
    std::uint64_t gt_row(int u) const noexcept { return rows_[static_cast<std::size_t>(node_count() + u)]; }
    std::uint64_t& ge_row(int u) noexcept { return rows_[static_cast<std::size_t>(u)]; }
    std::uint64_t& gt_row(int u) noexcept { return rows_[static_cast<std::size_t>(node_count() + u)]; }

    bool has_strict_self_loop() const noexcept {
        if (bottom_) return true;
        for (int u = 0; u < node_count(); ++u) {
            if (gt_row(u) & detail::bit(u)) return true;
        }
        return false;
    }

    /// All recorded arcs except self loops, ordered by (from node, to node).
    std::vector<Arc> arcs() const {
        std::vector<Arc> out;
        for (int u = 0; u < node_count(); ++u) {
            for (int v = 0; v < node_count(); ++v) {
                if (u == v) continue;
                if (auto s = node_relation(u, v)) out.push_back({var(u), var(v), *s});
            }
        }
        return out;
    }

    std::size_t arc_count() const noexcept {
        std::size_t n = 0;
        for (int u = 0; u < node_count(); ++u) {
            n += static_cast<std::size_t>(std::popcount(ge_row(u) & ~detail::bit(u)));
        }
        return n;
    }

    bool empty() const noexcept {
        return std::all_of(rows_.begin(), rows_.end(), [](std::uint64_t r) { return r == 0; });
    }

    McGraph with_endpoints(PointId source, PointId target) const {
        McGraph copy = *this;
        copy.source_ = source;
        copy.target_ = target;
        return copy;
    }

    std::size_t hash() const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t x) {
            h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        };
        mix(source_);
        mix(target_);
        mix(static_cast<std::uint64_t>(sourceArity_) << 8 | static_cast<std::uint64_t>(targetArity_));
        for (auto r : rows_) mix(r);
        mix(bottom_ ? 1 : 0);
        return static_cast<std::size_t>(h);
    }

    friend bool operator==(const McGraph&, const McGraph&) = default;

private:
    friend McGraph logical_closure(const McGraph& g);
    friend McGraph compose(const McGraph& g1, const McGraph& g2);

    PointId source_ = 0;
    PointId target_ = 0;
    int sourceArity_ = 0;
    int targetArity_ = 0;
    std::vector<std::uint64_t> rows_;
    bool bottom_ = false;  // inconsistent even when there are no nodes to carry a strict self loop
};

struct McGraphHash {
    std::size_t operator()(const McGraph& g) const noexcept { return g.hash(); }
};

/// Reachability closure with strictness propagation. Idempotent.
inline McGraph logical_closure(const McGraph& g) {
    McGraph out = g;
    const int n = g.node_count();
    detail::close_rows(out.rows_.data(), out.rows_.data() + n, n);
    return out;
}

/// True iff the graph has no cycle through a strict arc.
inline bool is_satisfiable(const McGraph& g) { return !logical_closure(g).has_strict_self_loop(); }

/// Relations between g1's source and g2's target implied by some intermediate state.
/// The result may be unsatisfiable; callers check. A contradiction that lives only
/// among the intermediate nodes yields the bottom graph: every arc strict, self
/// loops included.
inline McGraph compose(const McGraph& g1, const McGraph& g2) {
    if (g1.target() != g2.source() || g1.target_arity() != g2.source_arity()) {
        throw MismatchedPoints("cannot compose: first target does not match second source");
    }
    const int a = g1.source_arity();
    const int m = g1.target_arity();
    const int b = g2.target_arity();
    const int n = a + m + b;
    if (n > kMaxNodes) throw ArityMismatch("composition exceeds the node limit");

    std::uint64_t ge[kMaxNodes] = {};
    std::uint64_t gt[kMaxNodes] = {};
    for (int u = 0; u < a + m; ++u) {
        ge[u] = g1.ge_row(u);
        gt[u] = g1.gt_row(u);
    }
    for (int u = 0; u < m + b; ++u) {
        ge[a + u] |= g2.ge_row(u) << a;
        gt[a + u] |= g2.gt_row(u) << a;
    }
    detail::close_rows(ge, gt, n);

    McGraph out(g1.source(), g2.target(), a, b);
    for (int u = 0; u < n; ++u) {
        if (gt[u] & detail::bit(u)) {
            const std::uint64_t all = detail::low_mask(a + b);
            for (auto& row : out.rows_) row = all;
            out.bottom_ = true;
            return out;
        }
    }
    const std::uint64_t lowA = detail::low_mask(a);
    auto project = [&](std::uint64_t row) { return (row & lowA) | ((row >> (a + m)) << a); };
    for (int r = 0; r < a + b; ++r) {
        const int o = r < a ? r : r + m;
        out.rows_[static_cast<std::size_t>(r)] = project(ge[o]);
        out.rows_[static_cast<std::size_t>(a + b + r)] = project(gt[o]);
    }
    return out;
}

/// Canonical text: `x1 > x2', x3 = x3'`. Equalities are re-sugared; each pair of
/// nodes is listed once with the lower node on the left.
inline std::string render_relations(const McGraph& g, const std::vector<std::string>& sourceNames,
                                    const std::vector<std::string>& targetNames) {
    auto name = [&](int node) {
        const VarNode v = g.var(node);
        if (v.side == Side::Source) {
            return static_cast<std::size_t>(v.index) <= sourceNames.size()
                       ? sourceNames[static_cast<std::size_t>(v.index - 1)]
                       : "x" + std::to_string(v.index);
        }
        return (static_cast<std::size_t>(v.index) <= targetNames.size()
                    ? targetNames[static_cast<std::size_t>(v.index - 1)]
                    : "x" + std::to_string(v.index)) +
               "'";
    };
    std::string out;
    auto emit = [&](int u, const char* op, int v) {
        if (!out.empty()) out += ", ";
        out += name(u);
        out += ' ';
        out += op;
        out += ' ';
        out += name(v);
    };
    const int n = g.node_count();
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            const auto uv = g.node_relation(u, v);
            const auto vu = g.node_relation(v, u);
            if (uv == Strictness::NonStrict && vu == Strictness::NonStrict) {
                emit(u, "=", v);
                continue;
            }
            if (uv) emit(u, *uv == Strictness::Strict ? ">" : ">=", v);
            if (vu) emit(u, *vu == Strictness::Strict ? "<" : "<=", v);
        }
    }
    return out;
}

inline std::string render_relations(const McGraph& g) { return render_relations(g, {}, {}); }

// ---------------------------------------------------------------------------
// Multipaths
// ---------------------------------------------------------------------------

/// Address of the node x[t,i] of a multipath (t is the time coordinate, i is 1-based).
struct PathNode {
    int t = 0;
    int i = 1;
    friend bool operator==(const PathNode&, const PathNode&) = default;
};

class Multipath {
public:
    Multipath(PointId start, int arity) : points_{start}, arities_{arity}, offsets_{0, arity} {}

    explicit Multipath(const McGraph& first)
        : Multipath(first.source(), first.source_arity()) {
        append(first);
    }

    static Multipath of(const std::vector<McGraph>& steps) {
        if (steps.empty()) throw PreconditionError("multipath needs a start point or at least one step");
        Multipath m(steps.front().source(), steps.front().source_arity());
        for (const auto& s : steps) m.append(s);
        return m;
    }

    void append(const McGraph& g) {
        if (g.source() != points_.back() || g.source_arity() != arities_.back()) {
            throw MismatchedPoints("multipath step does not start where the previous one ends");
        }
        steps_.push_back(g);
        points_.push_back(g.target());
        arities_.push_back(g.target_arity());
        offsets_.push_back(offsets_.back() + g.target_arity());
    }

    int length() const noexcept { return static_cast<int>(steps_.size()); }
    const std::vector<McGraph>& steps() const noexcept { return steps_; }
    const std::vector<PointId>& points() const noexcept { return points_; }
    int arity(int t) const { return arities_.at(static_cast<std::size_t>(t)); }
    int node_count() const noexcept { return offsets_.back(); }

    int node(PathNode p) const {
        if (p.t < 0 || p.t > length() || p.i < 1 || p.i > arity(p.t)) {
            throw UnknownVariable("multipath node out of range");
        }
        return offsets_[static_cast<std::size_t>(p.t)] + p.i - 1;
    }

    PathNode address(int node) const {
        auto it = std::upper_bound(offsets_.begin(), offsets_.end(), node);
        const int t = static_cast<int>(it - offsets_.begin()) - 1;
        return {t, node - offsets_[static_cast<std::size_t>(t)] + 1};
    }

    struct WeightedArc {
        int from;
        int to;
        int weight;  // 0 for >=, -1 for >
    };

    /// Arcs of all steps in global node numbering (self loops included).
    std::vector<WeightedArc> weighted_arcs() const {
        std::vector<WeightedArc> out;
        for (int t = 1; t <= length(); ++t) {
            const McGraph& g = steps_[static_cast<std::size_t>(t - 1)];
            const int base0 = offsets_[static_cast<std::size_t>(t - 1)];
            const int base1 = offsets_[static_cast<std::size_t>(t)];
            auto global = [&](int local) {
                return local < g.source_arity() ? base0 + local : base1 + local - g.source_arity();
            };
            for (int u = 0; u < g.node_count(); ++u) {
                for (int v = 0; v < g.node_count(); ++v) {
                    if (auto s = g.node_relation(u, v)) {
                        out.push_back({global(u), global(v), *s == Strictness::Strict ? -1 : 0});
                    }
                }
            }
        }
        return out;
    }

private:
    std::vector<PointId> points_;
    std::vector<int> arities_;
    std::vector<int> offsets_;
    std::vector<McGraph> steps_;
};

/// Left fold of compose over the steps; a length-1 multipath collapses to the closure of its step.
inline McGraph collapse(const Multipath& m) {
    if (m.length() < 1) throw PreconditionError("collapse needs at least one step");
    McGraph acc = logical_closure(m.steps().front());
    for (std::size_t k = 1; k < m.steps().size(); ++k) acc = compose(acc, logical_closure(m.steps()[k]));
    return acc;
}

using Assignment = std::vector<std::optional<std::int64_t>>;

namespace detail {

inline constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Multi-source Bellman-Ford (queue based). dist holds initial potentials (kInf for
// absent sources). Returns false when a negative cycle is reachable.
inline bool relax(int n, const std::vector<Multipath::WeightedArc>& arcs, std::vector<std::int64_t>& dist) {
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));
    for (const auto& a : arcs) adj[static_cast<std::size_t>(a.from)].push_back({a.to, a.weight});
    std::vector<int> pushes(static_cast<std::size_t>(n), 0);
    std::vector<char> queued(static_cast<std::size_t>(n), 0);
    std::deque<int> queue;
    for (int v = 0; v < n; ++v) {
        if (dist[static_cast<std::size_t>(v)] < kInf) {
            queue.push_back(v);
            queued[static_cast<std::size_t>(v)] = 1;
        }
    }
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        queued[static_cast<std::size_t>(u)] = 0;
        for (auto [v, w] : adj[static_cast<std::size_t>(u)]) {
            const std::int64_t cand = dist[static_cast<std::size_t>(u)] + w;
            if (cand < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = cand;
                if (!queued[static_cast<std::size_t>(v)]) {
                    if (++pushes[static_cast<std::size_t>(v)] > n + 1) return false;
                    queue.push_back(v);
                    queued[static_cast<std::size_t>(v)] = 1;
                }
            }
        }
    }
    return true;
}

inline std::vector<Multipath::WeightedArc> reversed(std::vector<Multipath::WeightedArc> arcs) {
    for (auto& a : arcs) std::swap(a.from, a.to);
    return arcs;
}

}  // namespace detail

/// A finite multipath is satisfiable iff it has no strict cycle.
inline bool is_satisfiable(const Multipath& m) {
    const auto arcs = m.weighted_arcs();
    for (const auto& a : arcs) {
        if (a.from == a.to && a.weight < 0) return false;
    }
    std::vector<std::int64_t> dist(static_cast<std::size_t>(m.node_count()), 0);
    return detail::relax(m.node_count(), arcs, dist);
}

/// Minimum total weight (>= is 0, > is -1) over directed paths; nullopt means unreachable.
inline std::optional<std::int64_t> min_weight_path(const Multipath& m, PathNode from, PathNode to) {
    if (!is_satisfiable(m)) throw NegativeCycle("multipath is unsatisfiable");
    const int s = m.node(from);
    const int d = m.node(to);
    std::vector<std::int64_t> dist(static_cast<std::size_t>(m.node_count()), detail::kInf);
    dist[static_cast<std::size_t>(s)] = 0;
    detail::relax(m.node_count(), m.weighted_arcs(), dist);
    if (dist[static_cast<std::size_t>(d)] >= detail::kInf) return std::nullopt;
    return dist[static_cast<std::size_t>(d)];
}

/// True iff every arc holds; UNDEF endpoints satisfy everything.
inline bool satisfies(const Multipath& m, const Assignment& sigma) {
    for (const auto& a : m.weighted_arcs()) {
        const auto& x = sigma[static_cast<std::size_t>(a.from)];
        const auto& y = sigma[static_cast<std::size_t>(a.to)];
        if (!x || !y) continue;
        if (a.weight < 0 ? !(*x > *y) : !(*x >= *y)) return false;
    }
    return true;
}

/// Extends a partial assignment to a total one satisfying m, alternating between
/// nodes reachable from assigned ones (min rule) and nodes reaching assigned ones
/// (max rule); nodes connected to nothing assigned get potentials <= 0.
inline Assignment extend_assignment(const Multipath& m, Assignment sigma) {
    const int n = m.node_count();
    if (static_cast<int>(sigma.size()) != n) throw PreconditionError("assignment size does not match multipath");
    if (!is_satisfiable(m)) throw NegativeCycle("multipath is unsatisfiable");
    if (!satisfies(m, sigma)) throw InconsistentRestriction("partial assignment violates an arc among assigned nodes");

    const auto arcs = m.weighted_arcs();
    const auto rarcs = detail::reversed(arcs);
    auto assigned = [&](int v) { return sigma[static_cast<std::size_t>(v)].has_value(); };

    bool progress = true;
    while (progress) {
        progress = false;
        // Down layer: sigma(v) = min over assigned u of sigma(u) + delta(u, v).
        std::vector<std::int64_t> dist(static_cast<std::size_t>(n), detail::kInf);
        for (int v = 0; v < n; ++v) {
            if (assigned(v)) dist[static_cast<std::size_t>(v)] = *sigma[static_cast<std::size_t>(v)];
        }
        detail::relax(n, arcs, dist);
        for (int v = 0; v < n; ++v) {
            const auto d = dist[static_cast<std::size_t>(v)];
            if (assigned(v)) {
                if (d < *sigma[static_cast<std::size_t>(v)]) {
                    throw InconsistentRestriction("partial assignment cannot be extended");
                }
            } else if (d < detail::kInf) {
                sigma[static_cast<std::size_t>(v)] = d;
                progress = true;
            }
        }
        // Up layer: sigma(u) = max over assigned v of sigma(v) - delta(u, v).
        std::vector<std::int64_t> rdist(static_cast<std::size_t>(n), detail::kInf);
        for (int v = 0; v < n; ++v) {
            if (assigned(v)) rdist[static_cast<std::size_t>(v)] = -*sigma[static_cast<std::size_t>(v)];
        }
        detail::relax(n, rarcs, rdist);
        for (int v = 0; v < n; ++v) {
            const auto d = rdist[static_cast<std::size_t>(v)];
            if (assigned(v)) {
                if (d < -*sigma[static_cast<std::size_t>(v)]) {
                    throw InconsistentRestriction("partial assignment cannot be extended");
                }
            } else if (d < detail::kInf) {
                sigma[static_cast<std::size_t>(v)] = -d;
                progress = true;
            }
        }
    }
    // Remaining nodes touch nothing assigned.
    std::vector<std::int64_t> free(static_cast<std::size_t>(n), detail::kInf);
    for (int v = 0; v < n; ++v) {
        if (!assigned(v)) free[static_cast<std::size_t>(v)] = 0;
    }
    std::vector<Multipath::WeightedArc> freeArcs;
    for (const auto& a : arcs) {
        if (!assigned(a.from) && !assigned(a.to)) freeArcs.push_back(a);
    }
    detail::relax(n, freeArcs, free);
    for (int v = 0; v < n; ++v) {
        if (!assigned(v)) sigma[static_cast<std::size_t>(v)] = free[static_cast<std::size_t>(v)];
    }
    if (!satisfies(m, sigma)) throw InconsistentRestriction("extension failed to satisfy the multipath");
    return sigma;
}

/// Satisfiable with (x_min, x_max) = (0, N) at time 0. Pinning the gap adds the arcs
/// x_min -> x_max (weight N) and x_max -> x_min (weight -N); for instrumented
/// multipaths this reduces to "every path from x_max to x_min weighs at least -N".
inline bool n_satisfiable(const Multipath& m, std::int64_t N, int maxIndex, int minIndex) {
    if (!is_satisfiable(m)) return false;
    const int xmax = m.node({0, maxIndex});
    const int xmin = m.node({0, minIndex});
    const int n = m.node_count();
    std::vector<std::int64_t> dist(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<std::pair<int, std::int64_t>>> adj(static_cast<std::size_t>(n));
    for (const auto& a : m.weighted_arcs()) adj[static_cast<std::size_t>(a.from)].push_back({a.to, a.weight});
    adj[static_cast<std::size_t>(xmin)].push_back({xmax, N});
    adj[static_cast<std::size_t>(xmax)].push_back({xmin, -N});
    // Plain Bellman-Ford: weights here are not limited to {0, -1}.
    for (int round = 0; round <= n; ++round) {
        bool changed = false;
        for (int u = 0; u < n; ++u) {
            for (auto [v, w] : adj[static_cast<std::size_t>(u)]) {
                if (dist[static_cast<std::size_t>(u)] + w < dist[static_cast<std::size_t>(v)]) {
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + w;
                    changed = true;
                }
            }
        }
        if (!changed) return true;
    }
    return false;
}

/// The constructive assignment behind n_satisfiable: nodes sandwiched between x_max
/// and x_min get N + w(v), w(v) being the lightest path weight from x_max; the rest
/// is extended with extend_assignment.
inline std::optional<Assignment> n_satisfying_assignment(const Multipath& m, std::int64_t N, int maxIndex,
                                                         int minIndex) {
    if (N < 0 || !n_satisfiable(m, N, maxIndex, minIndex)) return std::nullopt;
    const int n = m.node_count();
    const auto arcs = m.weighted_arcs();
    const int xmax = m.node({0, maxIndex});
    const int xmin = m.node({0, minIndex});

    auto from = [&](int s, bool reverse) {
        std::vector<std::int64_t> d(static_cast<std::size_t>(n), detail::kInf);
        d[static_cast<std::size_t>(s)] = 0;
        detail::relax(n, reverse ? detail::reversed(arcs) : arcs, d);
        return d;
    };
    const auto fromMax = from(xmax, false);
    const auto toMax = from(xmax, true);
    const auto fromMin = from(xmin, false);
    const auto toMin = from(xmin, true);

    Assignment sigma(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        const auto i = static_cast<std::size_t>(v);
        if (toMin[i] == 0 && fromMin[i] == 0) {
            sigma[i] = 0;  // equal to x_min
        } else if (toMax[i] == 0 && fromMax[i] == 0) {
            sigma[i] = N;  // equal to x_max
        } else if (fromMax[i] < detail::kInf && toMin[i] < detail::kInf) {
            sigma[i] = N + fromMax[i];
        }
    }
    return extend_assignment(m, std::move(sigma));
}

}  // namespace mcbound
