#pragma once

// Full elaboration: every flow point is split into variants that fix a total
// order (with ties coalesced) of its variables. A variant is a pair (f, psi)
// where psi maps each variable of f to a position 1..k of the ascending chain
// x1 < x2 < ... < xk. Only variants reachable from an initial variant are built.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcbound/cts.hpp"
#include "mcbound/errors.hpp"
#include "mcbound/mcgraph.hpp"

namespace mcbound {

inline constexpr std::size_t kDefaultMaxElabPoints = 50000;

struct ElaboratedPoint {
    PointId origin = 0;
    std::vector<int> psi;  // psi[i-1] = position of origin variable i
    int classes = 0;
};

struct ElaboratedCts {
    Cts base;                             // the instrumented, saturated system
    Cts cts;                              // the elaborated system
    std::vector<ElaboratedPoint> info;    // per elaborated point
    std::vector<std::size_t> origin;      // per elaborated transition: index into base.transitions()
    std::vector<std::uint64_t> bounded;   // per elaborated point: B(f) as a bit mask (bit j-1 = position j)
    std::optional<PointId> baseF0;        // set when the base is instrumented

    /// Positions of x_max and x_min at an elaborated point.
    int max_position(PointId p) const { return position_of(p, base.arity(info[p].origin) - 1); }
    int min_position(PointId p) const { return position_of(p, base.arity(info[p].origin)); }

    std::vector<PointId> variants_of(PointId originPoint) const {
        std::vector<PointId> out;
        for (PointId p = 0; p < info.size(); ++p) {
            if (info[p].origin == originPoint) out.push_back(p);
        }
        return out;
    }

private:
    int position_of(PointId p, int originVar) const {
        if (!baseF0) throw NotInstrumented("elaborated system was not built from an instrumented one");
        return info[p].psi[static_cast<std::size_t>(originVar - 1)];
    }
};

namespace detail {

/// Calls emit(psi, classes) for every ordered set partition of {1..n} whose order
/// agrees with the relations among nodes base+1..base+n of the closed graph g
/// (all on one side). Variables are inserted one at a time, so each partition is
/// produced once.
template <class Emit>
void ordered_partitions(const McGraph& g, Side side, int n, Emit&& emit) {
    std::vector<int> pos(static_cast<std::size_t>(n), 0);  // block index of each placed var (0-based)
    std::vector<std::vector<int>> blocks;
    auto rel = [&](int a, int b) { return g.relation({side, a}, {side, b}); };

    std::function<void(int)> place = [&](int v) {
        if (v > n) {
            std::vector<int> psi(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) psi[static_cast<std::size_t>(i)] = pos[static_cast<std::size_t>(i)] + 1;
            emit(psi, static_cast<int>(blocks.size()));
            return;
        }
        // Allowed window for v's position: above everything it must exceed, below what must exceed it.
        auto consistent_join = [&](int b) {
            for (int w : blocks[static_cast<std::size_t>(b)]) {
                if (rel(v, w) == Strictness::Strict || rel(w, v) == Strictness::Strict) return false;
            }
            for (int c = 0; c < static_cast<int>(blocks.size()); ++c) {
                if (c == b) continue;
                for (int w : blocks[static_cast<std::size_t>(c)]) {
                    if (c < b && rel(w, v)) return false;  // w below v but w >= v required
                    if (c > b && rel(v, w)) return false;
                }
            }
            return true;
        };
        auto consistent_new = [&](int gap) {  // new block inserted before blocks[gap]
            for (int c = 0; c < static_cast<int>(blocks.size()); ++c) {
                for (int w : blocks[static_cast<std::size_t>(c)]) {
                    if (c < gap && rel(w, v)) return false;
                    if (c >= gap && rel(v, w)) return false;
                }
            }
            return true;
        };
        const int nb = static_cast<int>(blocks.size());
        for (int gap = 0; gap <= nb; ++gap) {
            if (gap < nb && consistent_join(gap)) {
                blocks[static_cast<std::size_t>(gap)].push_back(v);
                pos[static_cast<std::size_t>(v - 1)] = gap;
                place(v + 1);
                blocks[static_cast<std::size_t>(gap)].pop_back();
            }
            if (consistent_new(gap)) {
                blocks.insert(blocks.begin() + gap, std::vector<int>{v});
                for (int w = 1; w < v; ++w) {
                    if (pos[static_cast<std::size_t>(w - 1)] >= gap) ++pos[static_cast<std::size_t>(w - 1)];
                }
                pos[static_cast<std::size_t>(v - 1)] = gap;
                place(v + 1);
                for (int w = 1; w < v; ++w) {
                    if (pos[static_cast<std::size_t>(w - 1)] > gap) --pos[static_cast<std::size_t>(w - 1)];
                }
                blocks.erase(blocks.begin() + gap);
            }
        }
    };
    place(1);
}

inline void add_chain(McGraph& g, Side side, int k) {
    for (int c = 1; c < k; ++c) g.add({side, c + 1}, {side, c}, Strictness::Strict);
}

inline std::string signature(const std::vector<int>& psi) {
    std::string s;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (i) s += ".";
        s += std::to_string(psi[i]);
    }
    return s;
}

}  // namespace detail

/// Builds E(c) from a saturated system. When `ic` is instrumented, B(f) is filled in.
inline ElaboratedCts elaborate(const Cts& base, std::optional<PointId> f0, std::size_t maxPoints = kDefaultMaxElabPoints) {
    ElaboratedCts ec;
    ec.base = base;
    ec.baseF0 = f0;
    std::map<std::pair<PointId, std::vector<int>>, PointId> registry;
    std::vector<PointId> work;
    std::map<std::size_t, std::size_t> labelCounter;

    auto intern = [&](PointId origin, const std::vector<int>& psi, int classes, bool initial) -> PointId {
        auto key = std::make_pair(origin, psi);
        if (auto it = registry.find(key); it != registry.end()) return it->second;
        if (ec.info.size() >= maxPoints) {
            throw Explosion("elaboration exceeded " + std::to_string(maxPoints) + " points while expanding '" +
                                base.point(origin).id + "'",
                            maxPoints);
        }
        const auto& op = base.point(origin);
        std::vector<std::string> names(static_cast<std::size_t>(classes));
        for (std::size_t i = 0; i < psi.size(); ++i) {
            auto& nm = names[static_cast<std::size_t>(psi[i] - 1)];
            if (!nm.empty()) nm += ".";
            nm += op.vars[i];
        }
        const PointId id = ec.cts.add_point(op.id + "@" + detail::signature(psi), names, initial);
        McGraph inv(id, id, classes, 0);
        detail::add_chain(inv, Side::Source, classes);
        ec.cts.set_invariant(id, inv);
        ec.info.push_back({origin, psi, classes});
        registry.emplace(std::move(key), id);
        work.push_back(id);
        return id;
    };

    for (PointId f : base.initial_points()) {
        const McGraph inv = logical_closure(base.point(f).invariant);
        detail::ordered_partitions(inv, Side::Source, base.arity(f), [&](const std::vector<int>& psi, int k) {
            intern(f, psi, k, true);
        });
    }

    // Outgoing transitions per origin point, in declaration order.
    std::vector<std::vector<std::size_t>> outgoing(base.point_count());
    for (std::size_t t = 0; t < base.transitions().size(); ++t) {
        outgoing[base.transitions()[t].mc.source()].push_back(t);
    }

    for (std::size_t next = 0; next < work.size(); ++next) {
        const PointId p = work[next];
        const ElaboratedPoint ep = ec.info[p];
        for (std::size_t t : outgoing[ep.origin]) {
            const McGraph& G = base.transitions()[t].mc;
            const int b = G.target_arity();
            McGraph h(p, 0, ep.classes, b);
            detail::add_chain(h, Side::Source, ep.classes);
            for (const auto& arc : G.arcs()) {
                auto map = [&](VarNode v) {
                    return v.side == Side::Source ? src(ep.psi[static_cast<std::size_t>(v.index - 1)]) : v;
                };
                const VarNode a = map(arc.from);
                const VarNode c = map(arc.to);
                if (a == c) {
                    if (arc.strictness == Strictness::Strict) h.add(a, c, Strictness::Strict);
                    continue;
                }
                h.add(a, c, arc.strictness);
            }
            h = logical_closure(h);
            if (h.has_strict_self_loop()) continue;
            detail::ordered_partitions(h, Side::Target, b, [&](const std::vector<int>& psi2, int k2) {
                const PointId q = intern(G.target(), psi2, k2, false);
                McGraph g2(p, q, ep.classes, k2);
                for (int u = 1; u <= ep.classes + b; ++u) {
                    for (int v = 1; v <= ep.classes + b; ++v) {
                        const VarNode uu = u <= ep.classes ? src(u) : tgt(u - ep.classes);
                        const VarNode vv = v <= ep.classes ? src(v) : tgt(v - ep.classes);
                        const auto s = h.relation(uu, vv);
                        if (!s) continue;
                        auto map = [&](VarNode x) {
                            return x.side == Side::Source ? x : tgt(psi2[static_cast<std::size_t>(x.index - 1)]);
                        };
                        const VarNode a = map(uu);
                        const VarNode c = map(vv);
                        if (a != c) g2.add(a, c, *s);
                    }
                }
                detail::add_chain(g2, Side::Target, k2);
                g2 = logical_closure(g2);
                if (g2.has_strict_self_loop()) return;  // cannot happen for consistent partitions
                const std::string label =
                    base.transitions()[t].label + "." + std::to_string(++labelCounter[t]);
                ec.cts.add_transition(label, std::move(g2));
                ec.origin.push_back(t);
            });
        }
    }

    if (f0) {
        ec.bounded.resize(ec.info.size(), 0);
        for (PointId p = 0; p < ec.info.size(); ++p) {
            const int hi = ec.max_position(p);
            const int lo = ec.min_position(p);
            std::uint64_t mask = 0;
            for (int j = lo; j <= hi; ++j) mask |= detail::bit(j - 1);
            ec.bounded[p] = mask;
        }
    }
    return ec;
}

inline ElaboratedCts elaborate(const InstrumentedCts& ic, std::size_t maxPoints = kDefaultMaxElabPoints) {
    return elaborate(ic.cts, ic.f0, maxPoints);
}

/// B(f) for every elaborated point, as 1-based positions.
inline std::vector<std::vector<int>> bounded_variables(const ElaboratedCts& ec) {
    if (!ec.baseF0) throw NotInstrumented("bounded variables need an instrumented system");
    std::vector<std::vector<int>> out(ec.info.size());
    for (PointId p = 0; p < ec.info.size(); ++p) {
        for (int j = 1; j <= ec.info[p].classes; ++j) {
            if (ec.bounded[p] & detail::bit(j - 1)) out[p].push_back(j);
        }
    }
    return out;
}

struct DownwardClosureViolation {
    std::size_t transition;
    int i;  // source variable
    int j;  // target variable related to i
    int k;  // lower target variable lacking a strict relation
};

/// Checks the downward closure property on one MC: x_i ≻ x_j' entails x_i > x_k' for all k < j.
inline std::optional<DownwardClosureViolation> check_downward_closure(const McGraph& g, std::size_t index = 0) {
    for (int i = 1; i <= g.source_arity(); ++i) {
        for (int j = 1; j <= g.target_arity(); ++j) {
            if (!g.relation(src(i), tgt(j))) continue;
            for (int k = 1; k < j; ++k) {
                if (g.relation(src(i), tgt(k)) != Strictness::Strict) return DownwardClosureViolation{index, i, j, k};
            }
        }
    }
    return std::nullopt;
}

inline std::optional<DownwardClosureViolation> check_downward_closure(const ElaboratedCts& ec) {
    for (std::size_t t = 0; t < ec.cts.transitions().size(); ++t) {
        if (auto v = check_downward_closure(ec.cts.transitions()[t].mc, t)) return v;
    }
    return std::nullopt;
}

/// The elaborated point representing a concrete state of the base system.
inline std::optional<PointId> classify(const ElaboratedCts& ec, const State& s) {
    std::vector<Value> sorted = s.values;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> psi;
    for (Value v : s.values) {
        psi.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()) + 1);
    }
    const auto id = ec.base.point(s.point).id + "@" + detail::signature(psi);
    return ec.cts.find_point(id);
}

/// Projects a base state onto the positions of its elaborated point.
inline State lift(const ElaboratedCts& ec, PointId p, const State& s) {
    const auto& ep = ec.info[p];
    std::vector<Value> v(static_cast<std::size_t>(ep.classes));
    for (std::size_t i = 0; i < ep.psi.size(); ++i) v[static_cast<std::size_t>(ep.psi[i] - 1)] = s.values[i];
    return {p, std::move(v)};
}

}  // namespace mcbound
