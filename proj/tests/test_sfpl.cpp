#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "mcbound/oracle.hpp"
#include "mcbound/rbound.hpp"
#include "mcbound/sfpl.hpp"

using namespace mcbound;
using namespace mcbound::sfpl;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(MCBOUND_FIXTURES) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string random_string(std::mt19937& rng, std::size_t len, const std::string& alphabet = "01") {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
    return s;
}

}  // namespace

TEST(SfplParse, EqualityProgram) {
    const auto p = parse_sfpl(slurp("equality.sfpl"));
    ASSERT_EQ(p.functions.size(), 1u);
    EXPECT_EQ(p.functions[0].clauses.size(), 4u);
    EXPECT_EQ(p.variant, 1);
    EXPECT_EQ(p.arity, 2);
    EXPECT_EQ(p.entry, "f");
    EXPECT_EQ(p.alphabet, (std::set<char>{'0', '1'}));
}

TEST(SfplParse, EmptyProgramHasNoEntry) {
    EXPECT_THROW(parse_sfpl(""), SyntaxError);
    EXPECT_THROW(parse_sfpl("# nothing\n"), SyntaxError);
}

TEST(SfplParse, VariantInference) {
    EXPECT_EQ(parse_sfpl("f(x) = g(x) ? h(x), h(x);\ng(x) = x;\nh(x) = eps;\n").variant, 2);
    EXPECT_EQ(parse_sfpl("f(x) = let y = g(x) in g(y);\ng(x) = x;\n").variant, 3);
    EXPECT_EQ(parse_sfpl(slurp("contains.sfpl")).variant, 3);
    EXPECT_THROW(parse_sfpl("variant 1;\nf(x) = let y = g(x) in g(y);\ng(x) = x;\n"), VariantViolation);
    EXPECT_THROW(parse_sfpl("variant 1;\nf(x) = g(x) ? g(x), g(x);\ng(x) = x;\n"), VariantViolation);
}

TEST(SfplParse, Errors) {
    EXPECT_THROW(parse_sfpl("f(x, y) = eps;\nf(x) = eps;\n"), ArityMismatch);
    EXPECT_THROW(parse_sfpl("f(x, y) = f(x);\n"), ArityMismatch);
    EXPECT_THROW(parse_sfpl("f(x) = g(x);\n"), SyntaxError);
    EXPECT_THROW(parse_sfpl("f(eps) = x;\n"), SyntaxError);
    EXPECT_THROW(parse_sfpl("f(x, x) = eps;\n"), SyntaxError);
    EXPECT_THROW(parse_sfpl("f(x) = 1:2:3:x;\n"), SyntaxError);
    EXPECT_THROW(parse_sfpl("f(x) = y;\n"), SyntaxError);
    EXPECT_THROW(parse_sfpl("f(x) = eps\n"), SyntaxError);
    EXPECT_THROW(parse_sfpl("alphabet 01;\nf(2:x) = x;\n"), SyntaxError);
    EXPECT_THROW(parse_sfpl("f(x) = eps;\nentry g;\n"), UnknownPoint);
}

TEST(SfplParse, UnicodeEpsilon) {
    const auto p = parse_sfpl("f(\xCE\xB5) = 1;\n");
    EXPECT_EQ(p.functions[0].clauses[0].params[0].kind, Pattern::Kind::Eps);
}

TEST(SfplRun, EqualityTraces) {
    const auto p = parse_sfpl(slurp("equality.sfpl"));
    auto r = interpret(p, {"01", "01"});
    EXPECT_EQ(render_value(r.value), "1");
    EXPECT_EQ(r.maxStackHeight, 3u);
    ASSERT_EQ(r.trace.size(), 3u);
    EXPECT_EQ(r.trace[1].label, "f.2.1");
    EXPECT_EQ(r.trace[2].label, "f.3.1");
    EXPECT_EQ(r.trace[2].args, (std::vector<std::string>{"", ""}));

    r = interpret(p, {"0", "1"});
    ASSERT_TRUE(r.value);
    EXPECT_EQ(*r.value, "");
    EXPECT_EQ(r.maxStackHeight, 1u);

    EXPECT_EQ(render_value(interpret(p, {"10", "11"}).value), "eps");
    EXPECT_EQ(render_value(interpret(p, {"1101", "1101"}).value), "1");
    // After the swap the tails are compared crosswise: f(010, 001) -> f(001, 010) fails.
    EXPECT_EQ(render_value(interpret(p, {"1010", "1001"}).value), "eps");
}

TEST(SfplRun, FuelAndHalt) {
    const auto p = parse_sfpl(slurp("equality.sfpl"));
    EXPECT_THROW(interpret(p, {"0", "0"}, 0), FuelExhausted);
    EXPECT_THROW(interpret(p, {"0000", "0000"}, 3), FuelExhausted);
    EXPECT_NO_THROW(interpret(p, {"0000", "0000"}, 5));
    const auto q = parse_sfpl("f(0:x) = f(x);\n");
    const auto r = interpret(q, {"001"});
    EXPECT_FALSE(r.value);
    EXPECT_EQ(render_value(r.value), "HALT");
    EXPECT_THROW(interpret(p, {"0"}), ArityMismatch);
    EXPECT_THROW(interpret(p, {"2", "0"}), PreconditionError);
}

TEST(SfplRun, ConditionalAndLet) {
    const auto p = parse_sfpl(slurp("contains.sfpl"));
    EXPECT_EQ(render_value(interpret(p, {"0001"}).value), "1");
    // has(000) = eps, so the else branch: let y = has(000) in echo(y).
    const auto r = interpret(p, {"000"});
    EXPECT_EQ(render_value(r.value), "eps");
    EXPECT_EQ(r.maxStackHeight, 6u);  // main, no, has x4
}

TEST(SfplRun, Deterministic) {
    const auto p = parse_sfpl(slurp("pairs.sfpl"));
    const auto a = interpret(p, {"0110", "101", "101"});
    const auto b = interpret(p, {"0110", "101", "101"});
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.maxStackHeight, b.maxStackHeight);
    EXPECT_EQ(a.calls, b.calls);
}

TEST(SfplAbstract, TableRows) {
    const auto c = abstract(parse_sfpl(slurp("equality.sfpl")));
    ASSERT_EQ(c.point_count(), 1u);
    EXPECT_TRUE(c.point(0).initial);
    ASSERT_EQ(c.transitions().size(), 2u);
    const auto& same = c.transition("f.2.1").mc;
    EXPECT_EQ(same.relation(src(1), tgt(1)), Strictness::Strict);
    EXPECT_EQ(same.relation(src(2), tgt(2)), Strictness::Strict);
    EXPECT_FALSE(same.relation(src(1), tgt(2)));
    const auto& swap = c.transition("f.3.1").mc;
    EXPECT_EQ(swap.relation(src(1), tgt(2)), Strictness::Strict);
    EXPECT_EQ(swap.relation(src(2), tgt(1)), Strictness::Strict);
    EXPECT_FALSE(swap.relation(src(1), tgt(1)));
}

TEST(SfplAbstract, EpsilonAndSymbolRows) {
    const auto c = abstract(parse_sfpl("f(eps, x2, 0:x3) = f(eps, eps, 1);\n"));
    const auto& g = c.transitions()[0].mc;
    // eps/eps is equality; x/eps is >=; a:x/a' is >=.
    EXPECT_EQ(g.relation(src(1), tgt(1)), Strictness::NonStrict);
    EXPECT_EQ(g.relation(tgt(1), src(1)), Strictness::NonStrict);
    EXPECT_EQ(g.relation(src(1), tgt(2)), Strictness::NonStrict);
    EXPECT_EQ(g.relation(src(2), tgt(1)), Strictness::NonStrict);
    EXPECT_FALSE(g.relation(tgt(1), src(2)));
    EXPECT_EQ(g.relation(src(3), tgt(3)), Strictness::NonStrict);
    EXPECT_FALSE(g.relation(tgt(3), src(3)));

    const auto d = abstract(parse_sfpl("f(0:x1, x2) = f(1:x1, 1:0:x2);\n"));
    const auto& h = d.transitions()[0].mc;
    EXPECT_EQ(h.relation(src(1), tgt(1)), Strictness::NonStrict);
    EXPECT_EQ(h.relation(tgt(1), src(1)), Strictness::NonStrict);
    // b:a:x and x/a:x have no row.
    EXPECT_FALSE(h.relation(src(2), tgt(2)));
    EXPECT_FALSE(h.relation(tgt(2), src(2)));
}

TEST(SfplAbstract, ConditionalHasThreeTransitionsLetTwo) {
    const auto c = abstract(parse_sfpl(slurp("contains.sfpl")));
    EXPECT_NO_THROW(c.transition("main.1.1"));
    EXPECT_NO_THROW(c.transition("main.1.2"));
    EXPECT_NO_THROW(c.transition("main.1.3"));
    EXPECT_NO_THROW(c.transition("no.1.1"));
    const auto& let2 = c.transition("no.1.2").mc;
    EXPECT_EQ(let2.node_count(), 4);
    EXPECT_FALSE(let2.relation(src(1), tgt(1)));
    EXPECT_TRUE(c.point(c.point_id("main")).initial);
    EXPECT_FALSE(c.point(c.point_id("has")).initial);
}

TEST(SfplAbstract, RoundTripsThroughCtsText) {
    for (const char* f : {"equality.sfpl", "pairs.sfpl", "contains.sfpl"}) {
        const auto c = abstract(parse_sfpl(slurp(f)));
        EXPECT_TRUE(equivalent(parse_cts(render_cts(c)), c)) << f;
    }
}

TEST(SfplAbstract, EqualityIsBoundedLinear) {
    const Analysis a(abstract(parse_sfpl(slurp("equality.sfpl"))));
    EXPECT_TRUE(decide_bounded_termination(a).boundedTerminating);
    const auto r = origin_report(a, a.instrumented().cts.point_id("f"));
    ASSERT_TRUE(r.exists);
    EXPECT_EQ(r.degree, 1);
}

TEST(SfplAbstract, PairsIsBoundedQuadratic) {
    const Analysis a(abstract(parse_sfpl(slurp("pairs.sfpl"))));
    EXPECT_TRUE(decide_bounded_termination(a).boundedTerminating);
    EXPECT_EQ(origin_report(a, a.instrumented().cts.point_id("g")).degree, 2);
}

TEST(SfplSimulation, EveryRecordedCallSatisfiesItsConstraint) {
    std::mt19937 rng(9);
    for (const char* f : {"equality.sfpl", "pairs.sfpl", "contains.sfpl"}) {
        const auto p = parse_sfpl(slurp(f));
        const auto c = abstract(p);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<std::string> args;
            for (int i = 0; i < p.arity; ++i) args.push_back(random_string(rng, rng() % 7));
            if (trial % 3 == 0 && p.arity >= 2) args[1] = args[0];
            const auto r = interpret(p, args);
            const auto bad = check_simulation(c, r);
            EXPECT_FALSE(bad) << f << " edge " << (bad ? r.trace[*bad].label : "");
        }
    }
}

TEST(SfplSimulation, CallChainsAreRuns) {
    // Lengths along the deepest chain form a run of the abstraction of the same length.
    const auto p = parse_sfpl(slurp("pairs.sfpl"));
    const auto c = abstract(p);
    const auto r = interpret(p, {"011", "10", "10"});
    ASSERT_FALSE(r.trace.empty());
    State s{c.point_id(r.trace[0].callee), {}};
    for (const auto& a : r.trace[0].args) s.values.push_back(static_cast<Value>(a.size()));
    s.values.push_back(0);
    for (std::size_t e = 1; e < r.trace.size(); ++e) {
        const auto next = concrete_step(c, s, r.trace[e].label, 0, 10);
        State want{c.point_id(r.trace[e].callee), {}};
        for (const auto& a : r.trace[e].args) want.values.push_back(static_cast<Value>(a.size()));
        want.values.push_back(0);
        ASSERT_NE(std::find(next.begin(), next.end(), want), next.end()) << r.trace[e].label;
        s = want;
    }
    EXPECT_EQ(r.trace.size(), r.maxStackHeight);
}

TEST(SfplClaim, StackHeightIsPolynomial) {
    // Total input length s in 4..24; equality of two copies and pairs over three.
    const auto eq = parse_sfpl(slurp("equality.sfpl"));
    const auto pairs = parse_sfpl(slurp("pairs.sfpl"));
    std::vector<std::pair<Value, std::uint64_t>> eqSamples;
    std::vector<std::pair<Value, std::uint64_t>> pairSamples;
    for (Value s = 4; s <= 24; s += 4) {
        const std::string half(static_cast<std::size_t>(s / 2), '0');
        eqSamples.push_back({s, interpret(eq, {half, half}).maxStackHeight});
        const std::string third(static_cast<std::size_t>(s / 3), '1');
        pairSamples.push_back({s, interpret(pairs, {third, third, third}).maxStackHeight});
    }
    EXPECT_LE(fit_degree(eqSamples).slope, eq.arity + 1);
    EXPECT_LE(fit_degree(pairSamples).slope, pairs.arity + 1);
    EXPECT_NEAR(fit_degree(pairSamples).slope, 2.0, 0.35);
}
