#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "mcbound/termination.hpp"
#include "oracles.hpp"

using namespace mcbound;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(MCBOUND_FIXTURES) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// An infinite run x(t) = a_x + d_x * t of g exists for some rates d in [-3, 3].
// For fixed rates every arc u >= v (layers l_u, l_v) needs d_u >= d_v and
// a_u + d_u l_u >= a_v + d_v l_v (+1 when strict): a difference system on a.
bool linear_run_exists(const McGraph& g, std::uint64_t boundedDown, std::uint64_t boundedUp) {
    const int n = g.source_arity();
    const auto rels = oracle_ref::rels_of(g);
    std::vector<int> d(static_cast<std::size_t>(n), -3);
    while (true) {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            if ((boundedDown & detail::bit(i)) && d[static_cast<std::size_t>(i)] < 0) ok = false;
            if ((boundedUp & detail::bit(i)) && d[static_cast<std::size_t>(i)] > 0) ok = false;
        }
        auto var = [&](int node) { return node % n; };
        auto layer = [&](int node) { return node / n; };
        for (const auto& r : rels) {
            if (!ok) break;
            if (d[static_cast<std::size_t>(var(r.u))] < d[static_cast<std::size_t>(var(r.v))]) ok = false;
        }
        if (ok) {
            // a_v <= a_u + (d_u l_u - d_v l_v - strict): shortest paths, fail on a negative cycle.
            std::vector<long> dist(static_cast<std::size_t>(n), 0);
            bool changed = true;
            for (int round = 0; round <= n && changed; ++round) {
                changed = false;
                for (const auto& r : rels) {
                    const int u = var(r.u);
                    const int v = var(r.v);
                    const long w = d[static_cast<std::size_t>(u)] * layer(r.u) - d[static_cast<std::size_t>(v)] * layer(r.v) -
                                   (r.strict ? 1 : 0);
                    if (dist[static_cast<std::size_t>(u)] + w < dist[static_cast<std::size_t>(v)]) {
                        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + w;
                        changed = true;
                    }
                }
            }
            if (!changed) return true;
        }
        int k = 0;
        while (k < n && d[static_cast<std::size_t>(k)] == 3) d[static_cast<std::size_t>(k++)] = -3;
        if (k == n) return false;
        ++d[static_cast<std::size_t>(k)];
    }
}

// Some power of a satisfiable cyclic graph is idempotent.
std::optional<McGraph> idempotent_power(const McGraph& g) {
    McGraph h = logical_closure(g);
    for (int k = 0; k < 40; ++k) {
        if (h.has_strict_self_loop()) return std::nullopt;
        if (is_idempotent(h)) return h;
        h = compose(h, g);
    }
    return std::nullopt;
}

bool witness_mentions(const LassoWitness& w, const std::string& originLabel) {
    auto hit = [&](const std::vector<std::string>& labels) {
        for (const auto& l : labels) {
            if (l.rfind(originLabel + ".", 0) == 0) return true;
        }
        return false;
    };
    return hit(w.stem_labels) || hit(w.loop_labels);
}

}  // namespace

TEST(Omega, UnboundedDescent) {
    McGraph g(0, 0, 1, 1);
    g.add(src(1), tgt(1), Strictness::Strict);
    EXPECT_TRUE(omega_satisfiable(g));
    EXPECT_FALSE(omega_satisfiable(g, 1, 0));
    EXPECT_TRUE(omega_satisfiable(g, 0, 1));
}

TEST(Omega, DescentAboveConstantThread) {
    McGraph g(0, 0, 2, 2);
    g.add(src(1), tgt(1), Strictness::Strict);
    g.add(src(1), src(2), Strictness::NonStrict);
    g.add_equal(src(2), tgt(2));
    const auto h = idempotent_power(g);
    ASSERT_TRUE(h);
    EXPECT_FALSE(omega_satisfiable(*h));
}

TEST(Omega, StrictAscentBelowNonIncreasing) {
    // x_1 >= x_1', x_2' > x_2, x_1 >= x_2: the strict step sits on the up thread.
    McGraph g(0, 0, 2, 2);
    g.add(src(1), tgt(1), Strictness::NonStrict);
    g.add(tgt(2), src(2), Strictness::Strict);
    g.add(src(1), src(2), Strictness::NonStrict);
    g.add(tgt(1), tgt(2), Strictness::NonStrict);
    g = logical_closure(g);
    ASSERT_TRUE(is_idempotent(g));
    EXPECT_FALSE(omega_satisfiable(g));
}

TEST(Omega, StrictRelationAloneIsNotACollision) {
    // x_1 > x_2 with both constant: runs forever.
    McGraph g(0, 0, 2, 2);
    g.add_equal(src(1), tgt(1));
    g.add_equal(src(2), tgt(2));
    g.add(src(1), src(2), Strictness::Strict);
    g.add(tgt(1), tgt(2), Strictness::Strict);
    g = logical_closure(g);
    ASSERT_TRUE(is_idempotent(g));
    EXPECT_TRUE(omega_satisfiable(g));
}

TEST(Omega, RejectsNonIdempotent) {
    McGraph g(0, 0, 2, 2);
    g.add(src(1), tgt(2), Strictness::Strict);
    g.add(src(2), tgt(1), Strictness::Strict);
    EXPECT_THROW(omega_satisfiable(logical_closure(g)), NotIdempotent);
}

TEST(Omega, AgreesWithLinearRunsOnAllArityTwoIdempotents) {
    std::unordered_set<McGraph, McGraphHash> seen;
    const int nodes = 4;
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < nodes; ++u) {
        for (int v = 0; v < nodes; ++v) {
            if (u != v) pairs.push_back({u, v});
        }
    }
    std::vector<int> state(pairs.size(), 0);
    while (true) {
        McGraph g(0, 0, 2, 2);
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            if (state[k]) g.add_nodes(pairs[k].first, pairs[k].second, state[k] == 2 ? Strictness::Strict : Strictness::NonStrict);
        }
        g = logical_closure(g);
        if (!g.has_strict_self_loop() && is_idempotent(g)) seen.insert(g);
        std::size_t k = 0;
        while (k < state.size() && state[k] == 2) state[k++] = 0;
        if (k == state.size()) break;
        ++state[k];
    }
    EXPECT_GT(seen.size(), 50u);
    for (const auto& g : seen) {
        for (std::uint64_t down = 0; down < 4; ++down) {
            for (std::uint64_t up = 0; up < 4; ++up) {
                ASSERT_EQ(omega_satisfiable(g, down, up), linear_run_exists(g, down, up))
                    << render_relations(g) << " down=" << down << " up=" << up;
            }
        }
    }
}

TEST(Omega, AgreesWithLinearRunsOnRandomArityThree) {
    std::mt19937 rng(77);
    std::unordered_set<McGraph, McGraphHash> seen;
    for (int trial = 0; trial < 60000 && seen.size() < 3000; ++trial) {
        const double p = 0.1 + 0.3 * (trial % 4) / 3.0;
        const auto h = idempotent_power(oracle_ref::random_graph(rng, 0, 0, 3, 3, p));
        if (h) seen.insert(*h);
    }
    EXPECT_GT(seen.size(), 500u);
    for (const auto& g : seen) {
        const std::uint64_t down = rng() & 7;
        const std::uint64_t up = rng() & 7;
        ASSERT_EQ(omega_satisfiable(g), linear_run_exists(g, 0, 0)) << render_relations(g);
        ASSERT_EQ(omega_satisfiable(g, down, up), linear_run_exists(g, down, up)) << render_relations(g);
    }
}

TEST(Termination, FixtureVerdicts) {
    EXPECT_TRUE(decide_termination(parse_cts(slurp("ackermann.cts"))));
    EXPECT_TRUE(decide_termination(parse_cts(slurp("fig1.cts"))));
    EXPECT_FALSE(decide_termination(parse_cts("point p(x) initial\ntrans t: p -> p: x >= x'\n")));
    EXPECT_TRUE(decide_termination(parse_cts(slurp("empty.cts"))));
}

TEST(Termination, AckermannIsNotBounded) {
    const Analysis a(parse_cts(slurp("ackermann.cts")));
    const auto v = decide_bounded_termination(a);
    EXPECT_TRUE(v.terminating);
    EXPECT_FALSE(v.boundedTerminating);
    ASSERT_TRUE(v.witness);
    EXPECT_TRUE(check_lasso(a, *v.witness));
    // n only escapes its bounds through a2, which resets it arbitrarily.
    EXPECT_TRUE(witness_mentions(*v.witness, "a2"));
}

TEST(Termination, BoundedFixtures) {
    for (const char* f : {"fig1.cts", "fig2.cts", "fig4.cts", "min.cts", "simple_multiple_dep.cts", "running.cts"}) {
        const auto v = decide_bounded_termination(parse_cts(slurp(f)));
        EXPECT_TRUE(v.terminating) << f;
        EXPECT_TRUE(v.boundedTerminating) << f;
        EXPECT_FALSE(v.witness) << f;
    }
}

TEST(Termination, HeightNoteUsesInputArity) {
    const auto v = decide_bounded_termination(parse_cts(slurp("fig2.cts")));
    EXPECT_EQ(v.heightBoundNote, "O((max x - min x)^4)");
}

TEST(Termination, ForgedLassoRejected) {
    const Analysis a(parse_cts(slurp("ackermann.cts")));
    auto w = *decide_bounded_termination(a).witness;
    auto bad = w;
    bad.loop.clear();
    EXPECT_FALSE(check_lasso(a, bad));
    bad = w;
    bad.stem.insert(bad.stem.begin(), bad.loop.front());
    EXPECT_FALSE(check_lasso(a, bad));
}

TEST(Termination, RandomSystemsInvariants) {
    std::mt19937 rng(101);
    int negatives = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const Cts c = oracle_ref::random_cts(rng, 2, 3, 3, 0.25);
        const Analysis a(c);
        const auto v = decide_bounded_termination(a);
        if (v.boundedTerminating) {
            EXPECT_TRUE(v.terminating) << render_cts(c);
            continue;
        }
        ++negatives;
        ASSERT_TRUE(v.witness);
        EXPECT_TRUE(check_lasso(a, *v.witness)) << render_cts(c);
    }
    EXPECT_GT(negatives, 10);
}
