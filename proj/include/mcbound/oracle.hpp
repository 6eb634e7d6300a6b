#pragma once

// Exhaustive finite-domain exploration: the ground truth the analyses are
// checked against at desk scale.
//
// explore() runs the instrumented system with (x_min, x_max) pinned to (0, N),
// so every run starts from a state whose variables lie in [0, N]; values may
// then wander into [-pad, N + pad]. Run lengths are lower bounds of the true
// heights, exact when no run needs a value outside that window.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mcbound/cts.hpp"
#include "mcbound/errors.hpp"

namespace mcbound {

inline constexpr std::uint64_t kUnboundedCount = std::numeric_limits<std::uint64_t>::max();

struct OracleConfig {
    Value N = 0;
    std::optional<Value> pad = std::nullopt;  // defaults to 2N
    std::size_t maxStates = 2000000;

    Value effective_pad() const { return pad ? *pad : 2 * N; }
};

struct OracleResult {
    bool cyclic = false;
    std::uint64_t height = 0;           // kUnboundedCount when cyclic
    std::vector<std::uint64_t> visits;  // per point of the input system
    std::vector<State> trace;           // a longest run, in the input system's variables
    std::size_t states = 0;
};

namespace detail {

// Explicit state graph over a Cts, states numbered in discovery order, edges in
// compressed rows. Keys pack (point, values) in mixed radix.
class StateGraph {
public:
    StateGraph(const Cts& c, Domain domain, std::size_t maxStates) : c_(c), domain_(std::move(domain)), max_(maxStates) {
        for (const auto& t : c.transitions()) {
            McGraph mc = t.mc;
            add_invariant_to(mc, c.point(mc.target()).invariant, Side::Target);
            compiled_.emplace_back(mc);
        }
        width_.resize(c.point_count());
        lo_.resize(c.point_count());
        ranges_.resize(c.point_count());
        for (PointId p = 0; p < c.point_count(); ++p) {
            for (int k = 1; k <= c.arity(p); ++k) {
                const auto r = domain_(p, k);
                ranges_[p].push_back(r);
                lo_[p].push_back(r.lo);
                width_[p].push_back(static_cast<std::uint64_t>(std::max<Value>(0, r.hi - r.lo + 1)));
            }
            unsigned __int128 space = c.point_count();
            for (auto w : width_[p]) {
                space *= std::max<std::uint64_t>(w, 1);
                if (space > std::numeric_limits<std::uint64_t>::max() / 2) {
                    throw StateExplosion("state space does not fit a 64-bit key", max_);
                }
            }
        }
    }

    /// Adds a state (if new and within the invariant) and returns its index.
    std::optional<std::uint32_t> seed(const State& s) {
        if (!satisfies_invariant(c_, s)) return std::nullopt;
        return intern(s);
    }

    void run() {
        for (std::size_t i = 0; i < states_.size(); ++i) {
            offsets_.push_back(edges_.size());
            const State s = states_[i];
            for (std::size_t t = 0; t < compiled_.size(); ++t) {
                if (c_.transitions()[t].mc.source() != s.point) continue;
                const PointId target = c_.transitions()[t].mc.target();
                compiled_[t].successors(s.values.data(), ranges_[target], [&](const std::vector<Value>& v) {
                    edges_.push_back(intern({target, v}));
                });
            }
        }
        offsets_.push_back(edges_.size());
    }

    std::size_t size() const noexcept { return states_.size(); }
    const State& state(std::uint32_t i) const { return states_[i]; }

    template <class F>
    void for_succ(std::uint32_t i, F&& f) const {
        for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e) f(edges_[e]);
    }

    /// Post-order of everything reachable from the seeds; nullopt on a cycle.
    std::optional<std::vector<std::uint32_t>> postorder() const {
        const auto n = states_.size();
        std::vector<std::uint8_t> color(n, 0);
        std::vector<std::uint32_t> order;
        order.reserve(n);
        std::vector<std::pair<std::uint32_t, std::size_t>> stack;
        for (std::uint32_t root = 0; root < n; ++root) {
            if (color[root]) continue;
            stack.push_back({root, offsets_[root]});
            color[root] = 1;
            while (!stack.empty()) {
                auto& [u, e] = stack.back();
                if (e < offsets_[u + 1]) {
                    const auto v = edges_[e++];
                    if (color[v] == 1) return std::nullopt;
                    if (color[v] == 0) {
                        color[v] = 1;
                        stack.push_back({v, offsets_[v]});
                    }
                } else {
                    color[u] = 2;
                    order.push_back(u);
                    stack.pop_back();
                }
            }
        }
        return order;
    }

private:
    std::uint64_t key(const State& s) const {
        std::uint64_t k = 0;
        const auto& w = width_[s.point];
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            k = k * w[i] + static_cast<std::uint64_t>(s.values[i] - lo_[s.point][i]);
        }
        return k * c_.point_count() + s.point;
    }

    std::uint32_t intern(const State& s) {
        auto [it, fresh] = index_.try_emplace(key(s), static_cast<std::uint32_t>(states_.size()));
        if (fresh) {
            if (states_.size() >= max_) throw StateExplosion("oracle state cap reached", max_);
            states_.push_back(s);
        }
        return it->second;
    }

    const Cts& c_;
    Domain domain_;
    std::size_t max_;
    std::vector<CompiledTransition> compiled_;
    std::vector<std::vector<std::uint64_t>> width_;
    std::vector<std::vector<Value>> lo_;
    std::vector<std::vector<ValueRange>> ranges_;
    std::unordered_map<std::uint64_t, std::uint32_t> index_;
    std::vector<State> states_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> edges_;
};

// Every vector in [lo, hi]^n, in lexicographic order.
inline std::vector<std::vector<Value>> all_tuples(int n, Value lo, Value hi) {
    std::vector<std::vector<Value>> out;
    if (hi < lo) return out;
    std::vector<Value> v(static_cast<std::size_t>(n), lo);
    while (true) {
        out.push_back(v);
        int k = n - 1;
        while (k >= 0 && v[static_cast<std::size_t>(k)] == hi) v[static_cast<std::size_t>(k--)] = lo;
        if (k < 0) return out;
        ++v[static_cast<std::size_t>(k)];
    }
}

}  // namespace detail

inline OracleResult explore(const Cts& c, const OracleConfig& cfg) {
    if (cfg.N < 0 || cfg.effective_pad() < 0) throw PreconditionError("oracle needs N >= 0 and pad >= 0");
    const InstrumentedCts ic = prepare(c);
    const Cts& s = ic.cts;
    const Value N = cfg.N;
    const Value pad = cfg.effective_pad();
    // x_max and x_min are the last two variables everywhere.
    Domain dom = [&s, N, pad](PointId p, int k) {
        const int a = s.arity(p);
        if (k == a - 1) return ValueRange{N, N};
        if (k == a) return ValueRange{0, 0};
        return ValueRange{-pad, N + pad};
    };
    detail::StateGraph graph(s, dom, cfg.maxStates);
    const int k = s.arity(ic.f0) - 2;
    std::vector<std::uint32_t> seeds;
    for (auto v : detail::all_tuples(k, 0, N)) {
        v.push_back(N);
        v.push_back(0);
        if (auto i = graph.seed({ic.f0, v})) seeds.push_back(*i);
    }
    graph.run();

    OracleResult r;
    r.states = graph.size();
    const std::size_t m = c.point_count();
    const auto order = graph.postorder();
    if (!order) {
        r.cyclic = true;
        r.height = kUnboundedCount;
        r.visits.assign(m, kUnboundedCount);
        return r;
    }

    // Longest path and per-point visit counts, children before parents. The
    // step out of f0 is instrumentation and does not count.
    const auto n = graph.size();
    std::vector<std::uint64_t> height(n, 0);
    std::vector<std::vector<std::uint32_t>> visits(m, std::vector<std::uint32_t>(n, 0));
    for (auto u : *order) {
        const PointId pu = graph.state(u).point;
        graph.for_succ(u, [&](std::uint32_t v) { height[u] = std::max(height[u], height[v] + 1); });
        for (PointId f = 0; f < m; ++f) {
            std::uint32_t best = 0;
            graph.for_succ(u, [&](std::uint32_t v) { best = std::max(best, visits[f][v]); });
            visits[f][u] = best + (pu == f ? 1 : 0);
        }
    }
    r.visits.assign(m, 0);
    std::optional<std::uint32_t> start;
    for (auto s0 : seeds) {
        graph.for_succ(s0, [&](std::uint32_t v) {
            if (!start || height[v] > height[*start]) start = v;
            for (PointId f = 0; f < m; ++f) r.visits[f] = std::max<std::uint64_t>(r.visits[f], visits[f][v]);
        });
    }
    if (!start) return r;
    r.height = height[*start];
    for (std::uint32_t u = *start;;) {
        State st = graph.state(u);
        st.values.resize(st.values.size() - 2);
        r.trace.push_back(std::move(st));
        std::optional<std::uint32_t> next;
        graph.for_succ(u, [&](std::uint32_t v) {
            if (!next && height[v] + 1 == height[u]) next = v;
        });
        if (!next) break;
        u = *next;
    }
    return r;
}

struct DegreeFit {
    double slope = 0;
    double maxResidual = 0;
};

/// Least-squares slope of log count against log N over the top half of the samples.
inline DegreeFit fit_degree(const std::vector<std::pair<Value, std::uint64_t>>& samples) {
    if (samples.size() < 3) throw DegenerateSamples("degree fit needs at least three samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].first < 1 || samples[i].second < 1 || samples[i].second == kUnboundedCount) {
            throw DegenerateSamples("degree fit needs N >= 1 and finite counts >= 1");
        }
        if (i > 0 && samples[i].first <= samples[i - 1].first) throw DegenerateSamples("sample N must increase");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = samples.size() / 2; i < samples.size(); ++i) {
        xs.push_back(std::log(static_cast<double>(samples[i].first)));
        ys.push_back(std::log(static_cast<double>(samples[i].second)));
    }
    const double k = static_cast<double>(xs.size());
    double mx = 0;
    double my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / k;
        my += ys[i] / k;
    }
    double sxy = 0;
    double sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    DegreeFit fit;
    fit.slope = sxy / sxx;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fit.maxResidual = std::max(fit.maxResidual, std::abs(ys[i] - (my + fit.slope * (xs[i] - mx))));
    }
    return fit;
}

enum class GrowthEvidence { Increasing, Saturated, Cyclic, Inconclusive };

inline std::string to_string(GrowthEvidence e) {
    switch (e) {
        case GrowthEvidence::Increasing: return "increasing";
        case GrowthEvidence::Saturated: return "saturated";
        case GrowthEvidence::Cyclic: return "cyclic";
        case GrowthEvidence::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct UnboundednessReport {
    std::vector<std::uint64_t> lengths;  // longest run per domain, kUnboundedCount on a cycle
    GrowthEvidence evidence = GrowthEvidence::Inconclusive;
};

/// Longest runs of the (uninstrumented) system from one fixed state, for each
/// domain in turn. Strict growth across at least three domains is evidence of
/// unbounded nondeterminism; equal lengths on the last two are saturation.
inline UnboundednessReport check_unboundedness(const Cts& c, const State& initial, const std::vector<ValueRange>& domains,
                                               std::size_t maxStates = 2000000) {
    if (initial.point >= c.point_count() || static_cast<int>(initial.values.size()) != c.arity(initial.point)) {
        throw ArityMismatch("initial state does not match its point");
    }
    UnboundednessReport rep;
    for (const auto& d : domains) {
        for (auto v : initial.values) {
            if (v < d.lo || v > d.hi) throw PreconditionError("initial state lies outside a domain");
        }
        detail::StateGraph graph(c, uniform_domain(d.lo, d.hi), maxStates);
        const auto root = graph.seed(initial);
        if (!root) throw PreconditionError("initial state violates its point invariant");
        graph.run();
        const auto order = graph.postorder();
        if (!order) {
            rep.lengths.push_back(kUnboundedCount);
            continue;
        }
        std::vector<std::uint64_t> height(graph.size(), 0);
        for (auto u : *order) {
            graph.for_succ(u, [&](std::uint32_t v) { height[u] = std::max(height[u], height[v] + 1); });
        }
        rep.lengths.push_back(height[*root]);
    }
    const auto& L = rep.lengths;
    if (std::find(L.begin(), L.end(), kUnboundedCount) != L.end()) {
        rep.evidence = GrowthEvidence::Cyclic;
    } else if (L.size() >= 3 && std::adjacent_find(L.begin(), L.end(), std::greater_equal<>()) == L.end()) {
        rep.evidence = GrowthEvidence::Increasing;
    } else if (L.size() >= 2 && L[L.size() - 1] == L[L.size() - 2]) {
        rep.evidence = GrowthEvidence::Saturated;
    }
    return rep;
}

inline UnboundednessReport check_unboundedness(const Cts& c, const State& initial, const std::vector<Value>& upper) {
    std::vector<ValueRange> domains;
    for (auto d : upper) domains.push_back({0, d});
    return check_unboundedness(c, initial, domains);
}

}  // namespace mcbound
