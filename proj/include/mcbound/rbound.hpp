#pragma once

// Reachability bounds: whether a point is visited a bounded number of times,
// the tight degree L of Theta(N^L), and certificates for it.
//
// Everything works on the bounded restriction of the elaborated system, where
// the variables of a point f are numbered 1..n with x_min = 1 and x_max = n.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "mcbound/closure.hpp"
#include "mcbound/errors.hpp"
#include "mcbound/mcgraph.hpp"
#include "mcbound/termination.hpp"

namespace mcbound {

/// Level and direction per variable. Intervals are the maximal runs of equal
/// level. direction -1 means the variable counts down towards x_min, +1 that
/// it counts up towards x_max.
struct LevelPartition {
    int depth = 0;
    std::vector<int> level;      // level[i-1] of variable i, in [0, depth]
    std::vector<int> direction;  // -1 or +1

    int n() const noexcept { return static_cast<int>(level.size()); }

    std::vector<std::pair<int, int>> intervals() const {
        std::vector<std::pair<int, int>> out;
        for (int i = 1; i <= n(); ++i) {
            if (out.empty() || level[static_cast<std::size_t>(i - 1)] != level[static_cast<std::size_t>(out.back().first - 1)]) {
                out.push_back({i, i});
            } else {
                out.back().second = i;
            }
        }
        return out;
    }
};

struct RbCertificate {
    LevelPartition lp;
    std::vector<ClosureElement> graphs;  // graphs[h-1] is G_h
};

struct RbReport {
    PointId point = 0;  // elaborated point the certificate lives at
    bool exists = false;
    std::optional<int> degree;
    std::string bound;  // "Theta(N^L)"
    std::optional<RbCertificate> certificate;
};

namespace detail {

// x_i >= x_i' oriented by direction: -1 asks for x_i >= x_i', +1 for x_i' >= x_i.
inline std::optional<Strictness> toward(const McGraph& g, int i, int d) {
    return d < 0 ? g.relation(src(i), tgt(i)) : g.relation(tgt(i), src(i));
}

inline bool in_situ(const McGraph& g, int i) { return g.relation(src(i), tgt(i)) || g.relation(tgt(i), src(i)); }

// In-situ summary of a cyclic graph: per variable, bit 0 = descends (x >= x'),
// bit 1 = strictly, bit 2 = ascends, bit 3 = strictly.
inline std::vector<std::uint8_t> in_situ_signature(const McGraph& g) {
    std::vector<std::uint8_t> sig(static_cast<std::size_t>(g.source_arity()), 0);
    for (int i = 1; i <= g.source_arity(); ++i) {
        std::uint8_t s = 0;
        if (auto r = g.relation(src(i), tgt(i))) s |= *r == Strictness::Strict ? 3 : 1;
        if (auto r = g.relation(tgt(i), src(i))) s |= *r == Strictness::Strict ? 12 : 4;
        sig[static_cast<std::size_t>(i - 1)] = s;
    }
    return sig;
}

}  // namespace detail

/// Exact check of the still / active / disconnected conditions for G at level h.
inline bool consistent_at(const McGraph& g, const LevelPartition& lp, int h) {
    if (g.source_arity() != lp.n() || g.target_arity() != lp.n()) return false;
    bool active = false;
    for (int i = 1; i <= lp.n(); ++i) {
        const int l = lp.level[static_cast<std::size_t>(i - 1)];
        const int d = lp.direction[static_cast<std::size_t>(i - 1)];
        if (l < h) {
            if (detail::in_situ(g, i)) return false;
            continue;
        }
        const auto r = detail::toward(g, i, d);
        if (!r) return false;
        // Still above h means exactly x_i >= x_i', never strict.
        if (l > h && *r == Strictness::Strict) return false;
        if (l == h && *r == Strictness::Strict) active = true;
    }
    return active;
}

/// Structural validity of a level partition: every level 1..depth used, levels
/// in range, directions in {-1, +1}.
inline bool well_formed(const LevelPartition& lp) {
    if (lp.depth < 0 || lp.depth > lp.n() || static_cast<int>(lp.direction.size()) != lp.n()) return false;
    std::vector<char> used(static_cast<std::size_t>(lp.depth + 1), 0);
    for (int i = 0; i < lp.n(); ++i) {
        const int l = lp.level[static_cast<std::size_t>(i)];
        const int d = lp.direction[static_cast<std::size_t>(i)];
        if (l < 0 || l > lp.depth || (d != -1 && d != 1)) return false;
        used[static_cast<std::size_t>(l)] = 1;
    }
    for (int h = 1; h <= lp.depth; ++h) {
        if (!used[static_cast<std::size_t>(h)]) return false;
    }
    return true;
}

inline bool verify_certificate(const RbCertificate& c) {
    if (!well_formed(c.lp) || static_cast<int>(c.graphs.size()) != c.lp.depth) return false;
    for (int h = 1; h <= c.lp.depth; ++h) {
        if (!consistent_at(c.graphs[static_cast<std::size_t>(h - 1)].mc, c.lp, h)) return false;
    }
    return true;
}

/// Cyclic elements at f, restricted to the kept variables, re-closed, deduplicated.
inline std::vector<McGraph> closure_at(const ClosureSet& cs, PointId f, std::uint64_t keep) {
    std::vector<McGraph> out;
    std::unordered_set<McGraph, McGraphHash> seen;
    for (const auto& e : cs.elements()) {
        if (e.mc.source() != f || e.mc.target() != f) continue;
        McGraph r = restrict(e.mc, keep, keep);
        if (seen.insert(r).second) out.push_back(std::move(r));
    }
    return out;
}

/// Cyclic elements at f of the bounded closure, with witnesses.
inline std::vector<const ClosureElement*> closure_at(const Analysis& a, PointId f) {
    std::vector<const ClosureElement*> out;
    for (const auto& e : a.bounded_closure().elements()) {
        if (e.mc.source() == f && e.mc.target() == f) out.push_back(&e);
    }
    return out;
}

inline bool rb_exists(const Analysis& a, PointId f) {
    for (const auto* e : closure_at(a, f)) {
        if (!is_idempotent(e->mc)) continue;
        const auto mask = detail::low_mask(e->mc.source_arity());
        if (omega_satisfiable(e->mc, mask, mask)) return false;
    }
    return true;
}

namespace detail {

// Depth-first search for G_1, G_2, ... over in-situ signatures. For a chosen
// tuple every level is forced: variable i sits at the largest h such that
// G_1..G_h all relate x_i to x_i', so the related sets must shrink along the
// chain. Directions are narrowed as graphs are added: related in G_h, and held
// still (non-strict) by every G_j below it.
class LevelSearch {
public:
    LevelSearch(int n, const std::vector<const ClosureElement*>& elements) : n_(n) {
        std::map<std::vector<std::uint8_t>, const ClosureElement*> bySig;
        for (const auto* e : elements) bySig.emplace(in_situ_signature(e->mc), e);  // first = shortest witness
        for (auto& [sig, e] : bySig) {
            std::uint64_t rel = 0;
            for (int i = 0; i < n_; ++i) {
                if (sig[static_cast<std::size_t>(i)]) rel |= bit(i);
            }
            if (rel == 0) continue;
            cands_.push_back({sig, rel, e});
        }
    }

    std::size_t candidates() const noexcept { return cands_.size(); }

    std::optional<RbCertificate> find(int k) {
        if (k == 0) {
            RbCertificate c;
            c.lp.level.assign(static_cast<std::size_t>(n_), 0);
            c.lp.direction.assign(static_cast<std::size_t>(n_), -1);
            return c;
        }
        chain_.clear();
        // allowed direction bits per variable: 1 = down, 2 = up
        std::vector<std::uint8_t> allowed(static_cast<std::size_t>(n_), 3);
        if (!extend(k, low_mask(n_), allowed)) return std::nullopt;
        return build(k, allowed_);
    }

private:
    struct Cand {
        std::vector<std::uint8_t> sig;
        std::uint64_t related;
        const ClosureElement* element;
    };

    static std::uint8_t dirs(std::uint8_t s) { return static_cast<std::uint8_t>(((s & 1) ? 1 : 0) | ((s & 4) ? 2 : 0)); }
    static std::uint8_t strict_dirs(std::uint8_t s) { return static_cast<std::uint8_t>(((s & 2) ? 1 : 0) | ((s & 8) ? 2 : 0)); }
    static std::uint8_t still_dirs(std::uint8_t s) {
        return static_cast<std::uint8_t>(((s & 3) == 1 ? 1 : 0) | ((s & 12) == 4 ? 2 : 0));
    }

    // Level h-1's variables are those related in G_{h-1} but not in G_h.
    bool active(const Cand& c, std::uint64_t levelVars, const std::vector<std::uint8_t>& allowed) const {
        for (int i = 0; i < n_; ++i) {
            if ((levelVars & bit(i)) && (strict_dirs(c.sig[static_cast<std::size_t>(i)]) & allowed[static_cast<std::size_t>(i)])) {
                return true;
            }
        }
        return false;
    }

    bool extend(int k, std::uint64_t within, std::vector<std::uint8_t> allowed) {
        for (const auto& c : cands_) {
            if (c.related & ~within) continue;
            auto next = allowed;
            bool ok = true;
            for (int i = 0; i < n_ && ok; ++i) {
                if (!(c.related & bit(i))) continue;
                auto& a = next[static_cast<std::size_t>(i)];
                a &= dirs(c.sig[static_cast<std::size_t>(i)]);
                // x_i sits at this level or above, so every lower graph must hold it still.
                for (const Cand* lower : chain_) a &= still_dirs(lower->sig[static_cast<std::size_t>(i)]);
                ok = a != 0;
            }
            if (!ok) continue;
            // The previous level is now closed: its variables' directions are final.
            if (!chain_.empty()) {
                const auto& prev = *chain_.back();
                if (!active(prev, prev.related & ~c.related, next)) continue;
            }
            chain_.push_back(&c);
            if (static_cast<int>(chain_.size()) == k) {
                if (active(c, c.related, next)) {
                    allowed_ = next;
                    return true;
                }
            } else if (extend(k, c.related, next)) {
                return true;
            }
            chain_.pop_back();
        }
        return false;
    }

    RbCertificate build(int k, const std::vector<std::uint8_t>& allowed) const {
        RbCertificate cert;
        cert.lp.depth = k;
        cert.lp.level.assign(static_cast<std::size_t>(n_), 0);
        cert.lp.direction.assign(static_cast<std::size_t>(n_), -1);
        for (int h = 1; h <= k; ++h) {
            const auto& c = *chain_[static_cast<std::size_t>(h - 1)];
            cert.graphs.push_back(*c.element);
            for (int i = 0; i < n_; ++i) {
                if (c.related & bit(i)) cert.lp.level[static_cast<std::size_t>(i)] = h;
            }
        }
        for (int i = 0; i < n_; ++i) {
            const int l = cert.lp.level[static_cast<std::size_t>(i)];
            const auto a = allowed[static_cast<std::size_t>(i)];
            int d = (a & 1) ? -1 : 1;
            if (l > 0) {
                // Prefer the direction that makes this variable strict at its own level.
                const auto s = strict_dirs(chain_[static_cast<std::size_t>(l - 1)]->sig[static_cast<std::size_t>(i)]) & a;
                if (s) d = (s & 1) ? -1 : 1;
            }
            cert.lp.direction[static_cast<std::size_t>(i)] = d;
        }
        return cert;
    }

    int n_;
    std::vector<Cand> cands_;
    std::vector<const Cand*> chain_;
    std::vector<std::uint8_t> allowed_;
};

}  // namespace detail

/// Some level partition of depth exactly k has a consistent set drawn from closure_at(f).
inline std::optional<RbCertificate> rbd(const Analysis& a, PointId f, int k) {
    if (!rb_exists(a, f)) throw NoBound("point '" + a.elaborated().cts.point(f).id + "' has no reachability bound");
    const int n = a.bounded_system().arity(f);
    if (k < 0 || k > n) return std::nullopt;
    detail::LevelSearch search(n, closure_at(a, f));
    auto cert = search.find(k);
    if (cert && !verify_certificate(*cert)) throw InconsistentCertificate("level search produced an invalid certificate");
    return cert;
}

inline std::string render_bound(int degree) { return "Theta(N^" + std::to_string(degree) + ")"; }

/// Largest L with rbd(f, L), searching down from n, plus its certificate.
/// Monotonicity in the depth is asserted rather than assumed.
inline RbReport max_degree(const Analysis& a, PointId f) {
    RbReport r;
    r.point = f;
    if (!rb_exists(a, f)) throw NoBound("point '" + a.elaborated().cts.point(f).id + "' has no reachability bound");
    r.exists = true;
    const int n = a.bounded_system().arity(f);
    detail::LevelSearch search(n, closure_at(a, f));
    // Each level needs its own graph, so the depth cannot exceed the candidate count.
    const int top = std::min<int>(n, static_cast<int>(search.candidates()));
    for (int k = top; k >= 0; --k) {
        auto cert = search.find(k);
        if (!cert) continue;
        if (!verify_certificate(*cert)) throw InconsistentCertificate("level search produced an invalid certificate");
        for (int below = k - 1; below >= 1; --below) {
            if (!search.find(below)) throw InconsistentCertificate("reachability degree is not monotone");
        }
        r.degree = k;
        r.bound = render_bound(k);
        r.certificate = std::move(*cert);
        return r;
    }
    throw InconsistentCertificate("depth 0 must always be attainable");
}

/// Per-point report for a point of the input system: the bound of a point is
/// the sum over its elaborated variants, so the degree is their maximum. The
/// certificate comes from a variant reaching it, preferring one where x_min
/// and x_max are distinct.
inline RbReport origin_report(const Analysis& a, PointId originPoint) {
    const auto& ec = a.elaborated();
    RbReport best;
    best.exists = true;
    bool any = false;
    for (PointId p : ec.variants_of(originPoint)) {
        if (!rb_exists(a, p)) {
            RbReport none;
            none.point = p;
            return none;
        }
        RbReport r = max_degree(a, p);
        const bool split = a.bounded_system().arity(p) >= 2;
        const bool bestSplit = any && a.bounded_system().arity(best.point) >= 2;
        if (!any || *r.degree > *best.degree || (*r.degree == *best.degree && split && !bestSplit)) best = std::move(r);
        any = true;
    }
    if (!any) {
        // The point is unreachable: never visited.
        best.degree = 0;
        best.bound = render_bound(0);
    }
    return best;
}

/// rho = <rho_L, ..., rho_1>, rho_h the sum of |x_i| over level h, where
/// |x|_{-1} = x - x_min and |x|_{+1} = x_max - x.
inline std::string emit_ranking(const LevelPartition& lp, const std::vector<std::string>& names) {
    auto name = [&](int i) {
        return static_cast<std::size_t>(i) <= names.size() ? names[static_cast<std::size_t>(i - 1)] : "x" + std::to_string(i);
    };
    const std::string xmin = name(1);
    const std::string xmax = name(lp.n());
    std::string out = "<";
    for (int h = lp.depth; h >= 1; --h) {
        std::string term;
        for (int i = 1; i <= lp.n(); ++i) {
            if (lp.level[static_cast<std::size_t>(i - 1)] != h) continue;
            const bool down = lp.direction[static_cast<std::size_t>(i - 1)] < 0;
            if (i == (down ? 1 : lp.n())) continue;  // identically zero
            if (!term.empty()) term += " + ";
            term += down ? "(" + name(i) + " - " + xmin + ")" : "(" + xmax + " - " + name(i) + ")";
        }
        out += term.empty() ? "0" : term;
        if (h > 1) out += ", ";
    }
    return out + ">";
}

/// Every G_h strictly decreases rho_h and does not increase any rho_g, g > h.
/// Read off the in-situ arcs; throws InconsistentCertificate on failure.
inline void check_ranking(const RbCertificate& c) {
    const auto& lp = c.lp;
    if (static_cast<int>(c.graphs.size()) != lp.depth) throw InconsistentCertificate("one graph per level is required");
    for (int h = 1; h <= lp.depth; ++h) {
        const McGraph& g = c.graphs[static_cast<std::size_t>(h - 1)].mc;
        bool drops = false;
        for (int i = 1; i <= lp.n(); ++i) {
            const int l = lp.level[static_cast<std::size_t>(i - 1)];
            if (l < h) continue;
            const auto r = detail::toward(g, i, lp.direction[static_cast<std::size_t>(i - 1)]);
            if (!r) {
                throw InconsistentCertificate("G_" + std::to_string(h) + " may increase |x_" + std::to_string(i) + "|");
            }
            if (l == h && *r == Strictness::Strict) drops = true;
        }
        if (!drops) throw InconsistentCertificate("G_" + std::to_string(h) + " does not decrease component " + std::to_string(h));
    }
}

/// eta(t): the largest h <= L such that b^(h-1) divides t.
inline int eta(std::uint64_t t, std::uint64_t b, int L) {
    int h = 1;
    std::uint64_t p = b;
    while (h < L && b > 1 && t % p == 0) {
        ++h;
        p *= b;
    }
    return h;
}

inline constexpr std::uint64_t kMaxWitnessLength = 4000000;

/// G_eta(1) G_eta(2) ... G_eta(b^L - 1) with b = floor(N / n); must be
/// N-satisfiable with x_min = 1 and x_max = n.
inline Multipath build_witness_multipath(const RbCertificate& c, std::int64_t N) {
    const int n = c.lp.n();
    const int L = c.lp.depth;
    if (n < 1 || N < n) throw PreconditionError("witness needs N >= n");
    const auto b = static_cast<std::uint64_t>(N / n);
    std::uint64_t len = 1;
    for (int h = 0; h < L; ++h) {
        if (len > kMaxWitnessLength / b) throw ResourceLimit("witness multipath too long", kMaxWitnessLength);
        len *= b;
    }
    len -= 1;
    const PointId f = L > 0 ? c.graphs.front().mc.source() : 0;
    Multipath m(f, n);
    for (std::uint64_t t = 1; t <= len; ++t) m.append(c.graphs[static_cast<std::size_t>(eta(t, b, L) - 1)].mc);
    if (!n_satisfiable(m, N, n, 1)) throw CertificateViolation("witness multipath is not N-satisfiable");
    return m;
}

}  // namespace mcbound
