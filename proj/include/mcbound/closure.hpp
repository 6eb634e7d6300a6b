#pragma once

// Composition closure of an (elaborated) system: every collapse of a finite
// satisfiable multipath, each with a shortest label witness.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mcbound/cts.hpp"
#include "mcbound/elaborate.hpp"
#include "mcbound/errors.hpp"
#include "mcbound/mcgraph.hpp"

namespace mcbound {

inline constexpr std::size_t kDefaultMaxClosure = 200000;

struct ClosureElement {
    McGraph mc;
    std::vector<std::size_t> witness;  // transition indices of the system the closure was built from
};

class ClosureSet {
public:
    const std::vector<ClosureElement>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    const ClosureElement& operator[](std::size_t k) const { return elements_[k]; }

    std::optional<std::size_t> find(const McGraph& g) const {
        auto it = index_.find(g);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// Inserts if absent; returns true when the element is new.
    bool insert(ClosureElement e) {
        auto [it, fresh] = index_.emplace(e.mc, elements_.size());
        if (fresh) elements_.push_back(std::move(e));
        return fresh;
    }

private:
    std::vector<ClosureElement> elements_;
    std::unordered_map<McGraph, std::size_t, McGraphHash> index_;
};

/// Least set containing every transition (closed) and closed under satisfiable
/// composition. Built breadth first by witness length, extending on the right
/// by single transitions, so each stored witness is a shortest one.
inline ClosureSet compute_closure(const Cts& system, std::size_t maxElements = kDefaultMaxClosure) {
    ClosureSet cs;
    const auto& ts = system.transitions();
    std::vector<std::vector<std::size_t>> out(system.point_count());
    for (std::size_t t = 0; t < ts.size(); ++t) out[ts[t].mc.source()].push_back(t);

    auto add = [&](ClosureElement e) {
        if (!cs.insert(std::move(e))) return;
        if (cs.size() > maxElements) {
            throw Explosion("closure exceeds " + std::to_string(maxElements) + " elements", maxElements);
        }
    };
    for (std::size_t t = 0; t < ts.size(); ++t) {
        McGraph g = logical_closure(ts[t].mc);
        if (g.has_strict_self_loop()) continue;
        add({std::move(g), {t}});
    }
    for (std::size_t k = 0; k < cs.size(); ++k) {
        const PointId tail = cs[k].mc.target();
        for (std::size_t t : out[tail]) {
            McGraph g = compose(cs[k].mc, ts[t].mc);
            if (g.has_strict_self_loop()) continue;
            if (cs.find(g)) continue;
            std::vector<std::size_t> w = cs[k].witness;
            w.push_back(t);
            add({std::move(g), std::move(w)});
        }
    }
    return cs;
}

inline ClosureSet compute_closure(const ElaboratedCts& ec, std::size_t maxElements = kDefaultMaxClosure) {
    return compute_closure(ec.cts, maxElements);
}

inline bool is_idempotent(const McGraph& g) {
    return g.source() == g.target() && g.source_arity() == g.target_arity() && compose(g, g) == g;
}

/// Cyclic idempotent elements at point f.
inline std::vector<const ClosureElement*> idempotents_at(const ClosureSet& cs, PointId f) {
    std::vector<const ClosureElement*> out;
    for (const auto& e : cs.elements()) {
        if (e.mc.source() == f && e.mc.target() == f && is_idempotent(e.mc)) out.push_back(&e);
    }
    return out;
}

/// Induced subgraph on the kept variables (bit j-1 keeps variable j), renumbered
/// compactly and re-closed.
inline McGraph restrict(const McGraph& g, std::uint64_t keepSource, std::uint64_t keepTarget) {
    keepSource &= detail::low_mask(g.source_arity());
    keepTarget &= detail::low_mask(g.target_arity());
    const int a = std::popcount(keepSource);
    const int b = std::popcount(keepTarget);
    std::vector<int> map(static_cast<std::size_t>(g.node_count()), -1);
    int next = 0;
    for (int i = 0; i < g.source_arity(); ++i) {
        if (keepSource & detail::bit(i)) map[static_cast<std::size_t>(i)] = next++;
    }
    for (int j = 0; j < g.target_arity(); ++j) {
        if (keepTarget & detail::bit(j)) map[static_cast<std::size_t>(g.source_arity() + j)] = next++;
    }
    McGraph r(g.source(), g.target(), a, b);
    for (int u = 0; u < g.node_count(); ++u) {
        const int mu = map[static_cast<std::size_t>(u)];
        if (mu < 0) continue;
        for (int v = 0; v < g.node_count(); ++v) {
            const int mv = map[static_cast<std::size_t>(v)];
            if (mv < 0) continue;
            if (auto s = g.node_relation(u, v)) r.add_nodes(mu, mv, *s);
        }
    }
    return logical_closure(r);
}

/// The elaborated system with every point cut down to its bounded variables
/// B(f). Point and transition indices are unchanged.
inline Cts restrict_to_bounded(const ElaboratedCts& ec) {
    if (!ec.baseF0) throw NotInstrumented("bounded restriction needs an instrumented system");
    Cts out;
    for (PointId p = 0; p < ec.cts.point_count(); ++p) {
        const auto& fp = ec.cts.point(p);
        std::vector<std::string> vars;
        for (int j = 0; j < fp.arity(); ++j) {
            if (ec.bounded[p] & detail::bit(j)) vars.push_back(fp.vars[static_cast<std::size_t>(j)]);
        }
        out.add_point(fp.id, vars, fp.initial);
        out.set_invariant(p, restrict(fp.invariant, ec.bounded[p], 0));
    }
    for (const auto& t : ec.cts.transitions()) {
        const auto& g = t.mc;
        out.add_transition(t.label, restrict(g, ec.bounded[g.source()], ec.bounded[g.target()]));
    }
    return out;
}

}  // namespace mcbound
