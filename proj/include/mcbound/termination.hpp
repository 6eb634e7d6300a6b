#pragma once

// Termination and bounded termination over the closure of the fully
// elaborated, instrumented system.

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "mcbound/closure.hpp"
#include "mcbound/cts.hpp"
#include "mcbound/elaborate.hpp"
#include "mcbound/errors.hpp"
#include "mcbound/mcgraph.hpp"

namespace mcbound {

struct Limits {
    std::size_t maxElabPoints = kDefaultMaxElabPoints;
    std::size_t maxClosure = kDefaultMaxClosure;
};

/// Whether g^omega (g repeated forever) is satisfiable over the integers. Bit
/// j-1 of boundedDown/boundedUp marks variable j as bounded below/above.
///
/// Along g^omega a variable is floored if it never descends (x_j' >= x_j) or is
/// bounded below, and capped if it never ascends (x_j >= x_j') or is bounded
/// above. The power is unsatisfiable exactly when a strictly descending x_i
/// stays above a floored x_j (x_i >= x_j in some pair of layers), or a strictly
/// ascending x_j stays below a capped x_i.
///
/// Every state after the first is both a source and a target, so each layer's
/// relations are first copied onto the other one (a no-op on elaborated graphs,
/// whose layers are the same total order).
inline bool omega_satisfiable(const McGraph& idem, std::uint64_t boundedDown = 0, std::uint64_t boundedUp = 0) {
    if (!is_idempotent(idem)) throw NotIdempotent("omega test needs an idempotent cyclic graph");
    const int n = idem.source_arity();
    McGraph g = idem;
    for (bool grew = true; grew;) {
        McGraph next = g;
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                if (i == j) continue;
                if (auto s = g.relation(src(i), src(j))) next.add(tgt(i), tgt(j), *s);
                if (auto s = g.relation(tgt(i), tgt(j))) next.add(src(i), src(j), *s);
            }
        }
        next = logical_closure(next);
        if (next.has_strict_self_loop()) return false;
        grew = !(next == g);
        g = std::move(next);
    }
    auto down = [&](int i) { return g.relation(src(i), tgt(i)); };
    auto up = [&](int j) { return g.relation(tgt(j), src(j)); };
    auto floored = [&](int j) { return (boundedDown & detail::bit(j - 1)) || up(j); };
    auto capped = [&](int i) { return (boundedUp & detail::bit(i - 1)) || down(i); };
    auto above = [&](int i, int j) {
        return i == j || g.relation(src(i), src(j)) || g.relation(src(i), tgt(j)) || g.relation(tgt(i), src(j)) ||
               g.relation(tgt(i), tgt(j));
    };
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (!above(i, j)) continue;
            if (down(i) == Strictness::Strict && floored(j)) return false;
            if (up(j) == Strictness::Strict && capped(i)) return false;
        }
    }
    return true;
}

/// A lasso: H leads from an initial point to the loop point, and L^omega is
/// satisfiable there. Both are label sequences of the elaborated system.
struct LassoWitness {
    PointId point = 0;
    std::vector<std::size_t> stem;  // H, elaborated transition indices
    std::vector<std::size_t> loop;  // L
    std::vector<std::string> stem_labels;
    std::vector<std::string> loop_labels;
};

struct TerminationVerdict {
    bool terminating = true;
    bool boundedTerminating = true;
    std::optional<LassoWitness> witness;  // set when not bounded-terminating
    std::string heightBoundNote;
};

/// Everything the analyses share: the prepared system, its elaboration, the
/// bounded restriction and the two closures. The full closure is built on demand.
class Analysis {
public:
    explicit Analysis(const Cts& c, Limits limits = {})
        : limits_(limits), original_(c), ic_(prepare(c)), ec_(elaborate(ic_, limits.maxElabPoints)),
          bounded_(restrict_to_bounded(ec_)), boundedClosure_(compute_closure(bounded_, limits.maxClosure)) {}

    const Cts& original() const noexcept { return original_; }
    const InstrumentedCts& instrumented() const noexcept { return ic_; }
    const ElaboratedCts& elaborated() const noexcept { return ec_; }
    const Cts& bounded_system() const noexcept { return bounded_; }
    const ClosureSet& bounded_closure() const noexcept { return boundedClosure_; }

    const ClosureSet& full_closure() const {
        if (!fullClosure_) fullClosure_ = compute_closure(ec_.cts, limits_.maxClosure);
        return *fullClosure_;
    }

    /// Shortest transition path from an initial elaborated point to p.
    std::vector<std::size_t> stem_to(PointId p) const {
        const auto& c = ec_.cts;
        std::vector<std::optional<std::size_t>> via(c.point_count());
        std::vector<char> seen(c.point_count(), 0);
        std::deque<PointId> queue;
        for (PointId s : c.initial_points()) {
            seen[s] = 1;
            queue.push_back(s);
        }
        while (!queue.empty()) {
            const PointId u = queue.front();
            queue.pop_front();
            if (u == p) break;
            for (std::size_t t = 0; t < c.transitions().size(); ++t) {
                const auto& g = c.transitions()[t].mc;
                if (g.source() != u || seen[g.target()]) continue;
                seen[g.target()] = 1;
                via[g.target()] = t;
                queue.push_back(g.target());
            }
        }
        if (!seen[p]) throw PreconditionError("point '" + c.point(p).id + "' is unreachable");
        std::vector<std::size_t> path;
        for (PointId v = p; via[v];) {
            path.push_back(*via[v]);
            v = c.transitions()[*via[v]].mc.source();
        }
        return {path.rbegin(), path.rend()};
    }

    LassoWitness lasso(PointId p, const std::vector<std::size_t>& loop) const {
        LassoWitness w;
        w.point = p;
        w.stem = stem_to(p);
        w.loop = loop;
        for (auto t : w.stem) w.stem_labels.push_back(ec_.cts.transitions()[t].label);
        for (auto t : w.loop) w.loop_labels.push_back(ec_.cts.transitions()[t].label);
        return w;
    }

    /// Largest arity among the points of the input system.
    int input_arity() const noexcept { return original_.max_arity(); }

private:
    Limits limits_;
    Cts original_;
    InstrumentedCts ic_;
    ElaboratedCts ec_;
    Cts bounded_;
    ClosureSet boundedClosure_;
    mutable std::optional<ClosureSet> fullClosure_;
};

/// First idempotent element whose omega power is satisfiable, if any.
inline const ClosureElement* find_omega_loop(const ClosureSet& cs, bool allBounded) {
    for (const auto& e : cs.elements()) {
        const auto& g = e.mc;
        if (g.source() != g.target() || !is_idempotent(g)) continue;
        const std::uint64_t mask = allBounded ? detail::low_mask(g.source_arity()) : 0;
        if (omega_satisfiable(g, mask, mask)) return &e;
    }
    return nullptr;
}

inline bool decide_termination(const Analysis& a) { return find_omega_loop(a.full_closure(), false) == nullptr; }

inline bool decide_termination(const Cts& c, Limits limits = {}) { return decide_termination(Analysis(c, limits)); }

inline TerminationVerdict decide_bounded_termination(const Analysis& a) {
    TerminationVerdict v;
    v.terminating = decide_termination(a);
    if (const auto* e = find_omega_loop(a.bounded_closure(), true)) {
        v.boundedTerminating = false;
        v.witness = a.lasso(e->mc.source(), e->witness);
    }
    if (v.boundedTerminating && !v.terminating) {
        throw InconsistentCertificate("bounded termination without termination");
    }
    const int n = a.input_arity();
    v.heightBoundNote = v.boundedTerminating ? "O((max x - min x)^" + std::to_string(n) + ")" : "none";
    return v;
}

inline TerminationVerdict decide_bounded_termination(const Cts& c, Limits limits = {}) {
    return decide_bounded_termination(Analysis(c, limits));
}

/// Mechanical re-check of a lasso: H is a path from an initial point to the loop
/// point, H followed by L twice is satisfiable, and the collapse of L restricted
/// to B is idempotent with a satisfiable omega power.
inline bool check_lasso(const Analysis& a, const LassoWitness& w) {
    const auto& c = a.elaborated().cts;
    if (w.loop.empty()) return false;
    PointId at = 0;
    if (w.stem.empty()) {
        if (!c.point(w.point).initial) return false;
        at = w.point;
    } else {
        at = c.transitions()[w.stem.front()].mc.source();
        if (!c.point(at).initial) return false;
    }
    std::vector<McGraph> steps;
    auto walk = [&](const std::vector<std::size_t>& ts) {
        for (auto t : ts) {
            const auto& g = c.transitions()[t].mc;
            if (g.source() != at) return false;
            steps.push_back(g);
            at = g.target();
        }
        return true;
    };
    if (!walk(w.stem) || at != w.point) return false;
    if (!walk(w.loop) || at != w.point) return false;
    if (!walk(w.loop)) return false;
    if (!is_satisfiable(Multipath::of(steps))) return false;

    std::vector<McGraph> loop;
    for (auto t : w.loop) loop.push_back(a.bounded_system().transitions()[t].mc);
    const McGraph g = collapse(Multipath::of(loop));
    if (!is_idempotent(g)) return false;
    const auto mask = detail::low_mask(g.source_arity());
    return omega_satisfiable(g, mask, mask);
}

}  // namespace mcbound
