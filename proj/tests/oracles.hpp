#pragma once

// Brute-force reference implementations used by the unit tests and the
// acceptance binary. Nothing here calls the library's closure or
// satisfiability code; they only share the data types.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "mcbound/cts.hpp"
#include "mcbound/mcgraph.hpp"

namespace oracle_ref {

struct Rel {
    int u;
    int v;
    bool strict;  // u > v when true, u >= v otherwise
};

/// Raw relations of a graph, read straight from its bit rows.
inline std::vector<Rel> rels_of(const mcbound::McGraph& g) {
    std::vector<Rel> out;
    for (int u = 0; u < g.node_count(); ++u) {
        for (int v = 0; v < g.node_count(); ++v) {
            if (auto s = g.node_relation(u, v)) out.push_back({u, v, *s == mcbound::Strictness::Strict});
        }
    }
    return out;
}

inline bool holds(const Rel& r, const std::vector<int>& val) {
    return r.strict ? val[r.u] > val[r.v] : val[r.u] >= val[r.v];
}

/// Backtracking search with a value range per node; returns the first model found.
inline std::optional<std::vector<int>> find_model(int n, const std::vector<Rel>& rels,
                                                  const std::vector<std::pair<int, int>>& ranges) {
    std::vector<std::vector<const Rel*>> by(static_cast<std::size_t>(n));
    for (const auto& r : rels) by[static_cast<std::size_t>(std::max(r.u, r.v))].push_back(&r);
    std::vector<int> val(static_cast<std::size_t>(n), 0);
    std::function<bool(int)> go = [&](int k) {
        if (k == n) return true;
        const auto [lo, hi] = ranges[static_cast<std::size_t>(k)];
        for (int x = lo; x <= hi; ++x) {
            val[static_cast<std::size_t>(k)] = x;
            bool ok = true;
            for (const Rel* r : by[static_cast<std::size_t>(k)]) {
                if (!holds(*r, val)) {
                    ok = false;
                    break;
                }
            }
            if (ok && go(k + 1)) return true;
        }
        return false;
    };
    if (!go(0)) return std::nullopt;
    return val;
}

inline std::optional<std::vector<int>> find_model(int n, const std::vector<Rel>& rels, int lo, int hi) {
    return find_model(n, rels, std::vector<std::pair<int, int>>(static_cast<std::size_t>(n), {lo, hi}));
}

inline bool brute_sat(int n, const std::vector<Rel>& rels, int lo, int hi) {
    return find_model(n, rels, lo, hi).has_value();
}

/// Implied relation u ? v by refutation: u >= v is implied iff adding v > u has no model.
/// Order constraints over n nodes have a model iff they have one in [0, n-1].
inline std::optional<bool> implied(int n, std::vector<Rel> rels, int u, int v) {
    rels.push_back({v, u, false});
    if (!brute_sat(n, rels, 0, n - 1)) return true;  // strict
    rels.back().strict = true;
    if (!brute_sat(n, rels, 0, n - 1)) return false;  // non-strict
    return std::nullopt;
}

/// Walk closure by search over (node, seen-a-strict-arc) states.
/// Cell values: 0 = unrelated, 1 = >=, 2 = >. Non-strict self loops are not reported.
inline std::vector<std::vector<int>> path_closure(int n, const std::vector<Rel>& rels) {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int s = 0; s < n; ++s) {
        std::vector<std::array<char, 2>> seen(static_cast<std::size_t>(n), {0, 0});
        std::vector<std::pair<int, int>> stack{{s, 0}};
        while (!stack.empty()) {
            auto [u, st] = stack.back();
            stack.pop_back();
            for (const auto& r : rels) {
                if (r.u != u) continue;
                const int nst = st | (r.strict ? 1 : 0);
                auto& mark = seen[static_cast<std::size_t>(r.v)][static_cast<std::size_t>(nst)];
                if (mark) continue;
                mark = 1;
                stack.push_back({r.v, nst});
            }
        }
        for (int v = 0; v < n; ++v) {
            const auto& m = seen[static_cast<std::size_t>(v)];
            int cell = m[1] ? 2 : (m[0] ? 1 : 0);
            if (v == s && cell == 1) cell = 0;
            out[static_cast<std::size_t>(s)][static_cast<std::size_t>(v)] = cell;
        }
    }
    return out;
}

/// Random graph with each ordered pair related with probability p (strict half the time).
template <class Rng>
mcbound::McGraph random_graph(Rng& rng, mcbound::PointId s, mcbound::PointId t, int a, int b, double p) {
    mcbound::McGraph g(s, t, a, b);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int u = 0; u < a + b; ++u) {
        for (int v = 0; v < a + b; ++v) {
            if (u == v || coin(rng) >= p) continue;
            g.add_nodes(u, v, coin(rng) < 0.5 ? mcbound::Strictness::Strict : mcbound::Strictness::NonStrict);
        }
    }
    return g;
}

/// Relations among the nodes of a multipath, global numbering.
inline std::vector<Rel> multipath_rels(const mcbound::Multipath& m) {
    std::vector<Rel> out;
    for (const auto& a : m.weighted_arcs()) out.push_back({a.from, a.to, a.weight < 0});
    return out;
}

/// Minimum path weight by exhaustive simple-path enumeration (weights 0 / -1).
/// Valid when there is no negative cycle. nullopt means unreachable.
inline std::optional<int> min_path_weight(int n, const std::vector<Rel>& rels, int from, int to) {
    if (from == to) return 0;
    std::optional<int> best;
    std::vector<char> onPath(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> dfs = [&](int u, int w) {
        if (u == to) {
            if (!best || w < *best) best = w;
            return;
        }
        for (const auto& r : rels) {
            if (r.u != u || onPath[static_cast<std::size_t>(r.v)]) continue;
            onPath[static_cast<std::size_t>(r.v)] = 1;
            dfs(r.v, w - (r.strict ? 1 : 0));
            onPath[static_cast<std::size_t>(r.v)] = 0;
        }
    };
    onPath[static_cast<std::size_t>(from)] = 1;
    dfs(from, 0);
    return best;
}

/// Random system: `points` points of arity 1..maxArity (point 0 initial), `transitions` random MCs.
template <class Rng>
mcbound::Cts random_cts(Rng& rng, int points, int maxArity, int transitions, double p) {
    mcbound::Cts c;
    const char* names[] = {"a", "b", "c", "d", "e"};
    for (int k = 0; k < points; ++k) {
        const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(maxArity));
        std::vector<std::string> vars(names, names + n);
        c.add_point("p" + std::to_string(k), vars, k == 0);
    }
    for (int k = 0; k < transitions; ++k) {
        const auto s = static_cast<mcbound::PointId>(rng() % static_cast<unsigned>(points));
        const auto d = static_cast<mcbound::PointId>(rng() % static_cast<unsigned>(points));
        c.add_transition("t" + std::to_string(k), random_graph(rng, s, d, c.arity(s), c.arity(d), p));
    }
    return c;
}

/// Every value vector of length n over [lo, hi].
inline std::vector<std::vector<mcbound::Value>> tuples(int n, mcbound::Value lo, mcbound::Value hi) {
    std::vector<std::vector<mcbound::Value>> out;
    std::vector<mcbound::Value> v(static_cast<std::size_t>(n), lo);
    while (true) {
        out.push_back(v);
        int k = 0;
        while (k < n && v[static_cast<std::size_t>(k)] == hi) v[static_cast<std::size_t>(k++)] = lo;
        if (k == n) break;
        ++v[static_cast<std::size_t>(k)];
    }
    return out;
}

inline bool holds_all(const std::vector<Rel>& rels, const std::vector<mcbound::Value>& vals) {
    for (const auto& r : rels) {
        const auto x = vals[static_cast<std::size_t>(r.u)];
        const auto y = vals[static_cast<std::size_t>(r.v)];
        if (r.strict ? !(x > y) : !(x >= y)) return false;
    }
    return true;
}

/// Labeled edge of the concrete state graph.
struct Edge {
    mcbound::State from;
    std::size_t transition;
    mcbound::State to;
    friend bool operator<(const Edge& a, const Edge& b) {
        return std::tie(a.from, a.transition, a.to) < std::tie(b.from, b.transition, b.to);
    }
    friend bool operator==(const Edge& a, const Edge& b) {
        return std::tie(a.from, a.transition, a.to) == std::tie(b.from, b.transition, b.to);
    }
};

/// Reachable states and edges by filtering every candidate target tuple; the
/// source and target invariants are enforced. Seeds: invariant-respecting
/// states of initial points with values in [lo, hi].
struct Explored {
    std::set<mcbound::State> states;
    std::set<Edge> edges;
};

inline Explored brute_explore(const mcbound::Cts& c, mcbound::Value lo, mcbound::Value hi) {
    using namespace mcbound;
    auto inv_ok = [&](const State& s) {
        return holds_all(rels_of(c.point(s.point).invariant), s.values);
    };
    Explored out;
    std::vector<State> work;
    for (PointId p : c.initial_points()) {
        for (auto& v : tuples(c.arity(p), lo, hi)) {
            State s{p, v};
            if (inv_ok(s) && out.states.insert(s).second) work.push_back(s);
        }
    }
    while (!work.empty()) {
        const State s = work.back();
        work.pop_back();
        for (std::size_t t = 0; t < c.transitions().size(); ++t) {
            const auto& g = c.transitions()[t].mc;
            if (g.source() != s.point) continue;
            const auto rels = rels_of(g);
            for (auto& v : tuples(g.target_arity(), lo, hi)) {
                std::vector<Value> all = s.values;
                all.insert(all.end(), v.begin(), v.end());
                if (!holds_all(rels, all)) continue;
                State n{g.target(), v};
                if (!inv_ok(n)) continue;
                out.edges.insert({s, t, n});
                if (out.states.insert(n).second) work.push_back(n);
            }
        }
    }
    return out;
}

}  // namespace oracle_ref
