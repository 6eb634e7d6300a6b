#pragma once

// A small string-processing functional language, its interpreter and its
// abstraction to a monotonicity-constraint transition system.
//
// Concrete syntax, one clause per `;`:
//
//   # equality
//   f(eps, eps) = 1;
//   f(0:x1, 0:x2) = f(x1, x2);
//   f(1:x1, 1:x2) = f(x2, x1);
//   f(x1, x2) = eps;
//
// Optional directives, anywhere between clauses: `entry g;`, `variant 2;`,
// `alphabet 012;`. Without `entry` the first defined function is the entry.
// Patterns are eps, a name, a:name or ?, and ?:name matches any head symbol.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mcbound/cts.hpp"
#include "mcbound/errors.hpp"
#include "mcbound/mcgraph.hpp"

namespace mcbound::sfpl {

struct Pattern {
    enum class Kind { Eps, Var, Cons, Any } kind = Kind::Var;
    char head = '?';  // Cons: the symbol, '?' for any
    std::string name;
};

/// eps, a, x_j, a:x_j, b:a:x_j or (in a let's second call) y: a literal prefix
/// followed by at most one variable.
struct Actual {
    std::string prefix;
    int var = 0;  // 1-based parameter position, 0 for none
    bool letVar = false;
};

struct Call {
    std::string function;
    std::vector<Actual> args;
};

struct Body {
    enum class Kind { Simple, Tail, Conditional, Let } kind = Kind::Simple;
    Actual value;             // Simple
    std::vector<Call> calls;  // Tail: 1, Conditional: 3, Let: 2
    std::string letName;
};

struct Clause {
    std::vector<Pattern> params;
    Body body;
    int line = 0;
};

struct Function {
    std::string name;
    std::vector<Clause> clauses;
};

struct Program {
    std::vector<Function> functions;
    std::string entry;
    int arity = 0;
    std::set<char> alphabet;
    int variant = 1;

    const Function& function(std::string_view name) const {
        for (const auto& f : functions) {
            if (f.name == name) return f;
        }
        throw UnknownPoint("undefined function '" + std::string(name) + "'");
    }

    std::size_t index_of(std::string_view name) const {
        for (std::size_t i = 0; i < functions.size(); ++i) {
            if (functions[i].name == name) return i;
        }
        throw UnknownPoint("undefined function '" + std::string(name) + "'");
    }
};

/// Label of the k-th call (1-based) in clause c (1-based) of f.
inline std::string call_label(const std::string& f, std::size_t clause, std::size_t k) {
    return f + "." + std::to_string(clause) + "." + std::to_string(k);
}

namespace detail {

struct Token {
    enum class Kind { Ident, Symbol, Punct, End } kind = Kind::End;
    std::string text;
    int line = 0;
    int column = 0;
};

inline std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < text.size()) {
        const char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (text.substr(i, 2) == "\xCE\xB5") {  // UTF-8 epsilon
            out.push_back({Token::Kind::Ident, "eps", line, col});
            advance(2);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
            out.push_back({Token::Kind::Ident, std::string(text.substr(i, j - i)), line, col});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            out.push_back({Token::Kind::Symbol, std::string(1, c), line, col});
            advance(1);
            continue;
        }
        if (std::string_view("(),:=;?").find(c) != std::string_view::npos) {
            out.push_back({Token::Kind::Punct, std::string(1, c), line, col});
            advance(1);
            continue;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back({Token::Kind::End, "", line, col});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

    Program parse() {
        Program p;
        std::optional<int> declared;
        std::optional<std::string> entry;
        std::optional<std::set<char>> alphabet;
        std::optional<int> arity;
        while (peek().kind != Token::Kind::End) {
            const Token head = next();
            if (head.kind != Token::Kind::Ident) fail(head, "expected a function name or directive");
            if (head.text == "entry" && peek().kind == Token::Kind::Ident) {
                entry = next().text;
                expect(";");
                continue;
            }
            if (head.text == "variant" && peek().kind == Token::Kind::Symbol) {
                declared = next().text[0] - '0';
                if (*declared < 1 || *declared > 3) fail(head, "variant must be 1, 2 or 3");
                expect(";");
                continue;
            }
            if (head.text == "alphabet" && peek().kind == Token::Kind::Symbol) {
                alphabet.emplace();
                while (peek().kind == Token::Kind::Symbol) alphabet->insert(next().text[0]);
                expect(";");
                continue;
            }
            Clause c;
            c.line = head.line;
            std::map<std::string, int> bound;
            expect("(");
            if (!accept(")")) {
                do {
                    c.params.push_back(pattern(static_cast<int>(c.params.size()) + 1, bound));
                } while (accept(","));
                expect(")");
            }
            if (!arity) arity = static_cast<int>(c.params.size());
            if (static_cast<int>(c.params.size()) != *arity) {
                throw ArityMismatch("clause of '" + head.text + "' at line " + std::to_string(head.line) +
                                    " has " + std::to_string(c.params.size()) + " parameters, expected " +
                                    std::to_string(*arity));
            }
            expect("=");
            c.body = body(bound);
            expect(";");
            auto it = std::find_if(p.functions.begin(), p.functions.end(), [&](const Function& f) { return f.name == head.text; });
            if (it == p.functions.end()) {
                p.functions.push_back({head.text, {}});
                it = p.functions.end() - 1;
            }
            it->clauses.push_back(std::move(c));
        }
        if (p.functions.empty()) throw SyntaxError("program defines no function", toks_.back().line, toks_.back().column);
        p.arity = *arity;
        p.entry = entry ? *entry : p.functions.front().name;
        p.function(p.entry);
        for (const auto& f : p.functions) {
            for (const auto& c : f.clauses) {
                for (const auto& call : c.body.calls) {
                    const auto known = std::any_of(p.functions.begin(), p.functions.end(),
                                                   [&](const Function& g) { return g.name == call.function; });
                    if (!known) throw SyntaxError("undefined function '" + call.function + "'", c.line, 1);
                    if (static_cast<int>(call.args.size()) != p.arity) {
                        throw ArityMismatch("call of '" + call.function + "' at line " + std::to_string(c.line) +
                                            " passes " + std::to_string(call.args.size()) + " arguments");
                    }
                }
                p.variant = std::max(p.variant, c.body.kind == Body::Kind::Conditional ? 2
                                                : c.body.kind == Body::Kind::Let       ? 3
                                                                                       : 1);
            }
        }
        if (declared && p.variant > *declared) {
            throw VariantViolation("program declared as variant " + std::to_string(*declared) + " needs variant " +
                                   std::to_string(p.variant));
        }
        if (declared) p.variant = *declared;
        p.alphabet = alphabet ? *alphabet : used_;
        if (!alphabet) {
            p.alphabet.insert('0');
            p.alphabet.insert('1');
        }
        for (char a : used_) {
            if (!p.alphabet.count(a)) throw SyntaxError(std::string("symbol '") + a + "' is not in the alphabet", 1, 1);
        }
        return p;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    bool accept(std::string_view punct) {
        if (peek().kind == Token::Kind::Punct && peek().text == punct) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(std::string_view punct) {
        if (!accept(punct)) fail(peek(), "expected '" + std::string(punct) + "'");
    }

    [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw SyntaxError(msg, t.line, t.column); }

    Pattern pattern(int position, std::map<std::string, int>& bound) {
        const Token t = next();
        auto bind = [&](const Token& nameTok) {
            if (nameTok.kind != Token::Kind::Ident || nameTok.text == "eps") fail(nameTok, "expected a parameter name");
            if (!bound.emplace(nameTok.text, position).second) fail(nameTok, "parameter '" + nameTok.text + "' bound twice");
            return nameTok.text;
        };
        if (t.kind == Token::Kind::Ident && t.text == "eps") return {Pattern::Kind::Eps, '?', ""};
        if (t.kind == Token::Kind::Punct && t.text == "?") {
            if (!accept(":")) return {Pattern::Kind::Any, '?', ""};
            return {Pattern::Kind::Cons, '?', bind(next())};
        }
        if (t.kind == Token::Kind::Symbol) {
            used_.insert(t.text[0]);
            expect(":");
            return {Pattern::Kind::Cons, t.text[0], bind(next())};
        }
        return {Pattern::Kind::Var, '?', bind(t)};
    }

    Actual actual(const std::map<std::string, int>& bound, const std::string& letName) {
        Actual a;
        Token t = next();
        if (t.kind == Token::Kind::Ident && t.text == "eps") return a;
        while (t.kind == Token::Kind::Symbol) {
            used_.insert(t.text[0]);
            a.prefix += t.text;
            if (!accept(":")) {
                if (a.prefix.size() > 1) fail(t, "a symbol prefix must end in a variable");
                return a;
            }
            t = next();
        }
        if (a.prefix.size() > 2) fail(t, "at most two symbols may be prepended");
        if (t.kind != Token::Kind::Ident || t.text == "eps") fail(t, "expected an actual parameter");
        if (!letName.empty() && t.text == letName) {
            if (!a.prefix.empty()) fail(t, "'" + letName + "' may only be passed as is");
            a.letVar = true;
            return a;
        }
        auto it = bound.find(t.text);
        if (it == bound.end()) fail(t, "undefined identifier '" + t.text + "'");
        a.var = it->second;
        return a;
    }

    Call call(const Token& name, const std::map<std::string, int>& bound, const std::string& letName) {
        Call c{name.text, {}};
        expect("(");
        if (!accept(")")) {
            do {
                c.args.push_back(actual(bound, letName));
            } while (accept(","));
            expect(")");
        }
        return c;
    }

    bool at_call() const {
        return peek().kind == Token::Kind::Ident && peek().text != "eps" && toks_[pos_ + 1].kind == Token::Kind::Punct &&
               toks_[pos_ + 1].text == "(";
    }

    Body body(const std::map<std::string, int>& bound) {
        Body b;
        if (peek().kind == Token::Kind::Ident && peek().text == "let" && toks_[pos_ + 1].kind == Token::Kind::Ident) {
            next();
            b.kind = Body::Kind::Let;
            b.letName = next().text;
            if (bound.count(b.letName)) fail(peek(), "'" + b.letName + "' shadows a parameter");
            expect("=");
            if (!at_call()) fail(peek(), "expected a call");
            b.calls.push_back(call(next(), bound, ""));
            const Token in = next();
            if (in.kind != Token::Kind::Ident || in.text != "in") fail(in, "expected 'in'");
            if (!at_call()) fail(peek(), "expected a call");
            b.calls.push_back(call(next(), bound, b.letName));
            return b;
        }
        if (!at_call()) {
            b.value = actual(bound, "");
            return b;
        }
        b.kind = Body::Kind::Tail;
        b.calls.push_back(call(next(), bound, ""));
        if (accept("?")) {
            b.kind = Body::Kind::Conditional;
            if (!at_call()) fail(peek(), "expected a call");
            b.calls.push_back(call(next(), bound, ""));
            expect(",");
            if (!at_call()) fail(peek(), "expected a call");
            b.calls.push_back(call(next(), bound, ""));
        }
        return b;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::set<char> used_;
};

}  // namespace detail

inline Program parse_sfpl(std::string_view text) { return detail::Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Interpreter
// ---------------------------------------------------------------------------

/// One call edge: the caller's arguments, the call expression and the callee's
/// arguments. The entry call has an empty label.
struct CallEvent {
    std::string caller;
    std::vector<std::string> callerArgs;
    std::string label;
    std::string callee;
    std::vector<std::string> args;
};

struct RunResult {
    std::optional<std::string> value;  // nullopt: the program halted on a match failure
    std::size_t maxStackHeight = 0;
    std::size_t calls = 0;
    std::vector<CallEvent> trace;
};

inline constexpr std::size_t kDefaultFuel = 1000000;

namespace detail {

inline bool matches(const Pattern& p, const std::string& v) {
    switch (p.kind) {
        case Pattern::Kind::Eps: return v.empty();
        case Pattern::Kind::Var:
        case Pattern::Kind::Any: return true;
        case Pattern::Kind::Cons: return !v.empty() && (p.head == '?' || v[0] == p.head);
    }
    return false;
}

}  // namespace detail

/// Evaluation with an explicit call stack. Every call, tail calls included,
/// pushes a frame; fuel bounds the number of calls.
inline RunResult interpret(const Program& p, const std::vector<std::string>& args, std::size_t fuel = kDefaultFuel,
                           bool recordTrace = true) {
    if (static_cast<int>(args.size()) != p.arity) {
        throw ArityMismatch("entry expects " + std::to_string(p.arity) + " arguments, got " + std::to_string(args.size()));
    }
    for (const auto& a : args) {
        for (char ch : a) {
            if (!p.alphabet.count(ch)) throw PreconditionError(std::string("symbol '") + ch + "' is not in the alphabet");
        }
    }
    struct Frame {
        std::size_t fn;
        std::vector<std::string> args;
        std::size_t clause = 0;
        int phase = 0;
        std::string y;
    };
    RunResult r;
    std::vector<Frame> stack;
    std::optional<std::string> ret;  // value delivered to the top frame

    auto bind = [](const Clause& c, const std::vector<std::string>& vals, const Actual& a, const std::string& y) {
        if (a.letVar) return y;
        std::string v = a.prefix;
        if (a.var) {
            const auto& pat = c.params[static_cast<std::size_t>(a.var - 1)];
            const auto& x = vals[static_cast<std::size_t>(a.var - 1)];
            v += pat.kind == Pattern::Kind::Cons ? x.substr(1) : x;
        }
        return v;
    };
    // Returns false when the callee has no matching clause.
    auto push = [&](std::size_t fn, std::vector<std::string> vals, const std::string& label) {
        if (r.calls >= fuel) throw FuelExhausted("fuel exhausted after " + std::to_string(r.calls) + " calls");
        ++r.calls;
        const auto& f = p.functions[fn];
        if (recordTrace) {
            CallEvent e;
            if (!stack.empty()) {
                e.caller = p.functions[stack.back().fn].name;
                e.callerArgs = stack.back().args;
            }
            e.label = label;
            e.callee = f.name;
            e.args = vals;
            r.trace.push_back(std::move(e));
        }
        for (std::size_t k = 0; k < f.clauses.size(); ++k) {
            const auto& c = f.clauses[k];
            bool ok = true;
            for (std::size_t i = 0; i < vals.size() && ok; ++i) ok = detail::matches(c.params[i], vals[i]);
            if (!ok) continue;
            stack.push_back({fn, std::move(vals), k, 0, {}});
            r.maxStackHeight = std::max(r.maxStackHeight, stack.size());
            return true;
        }
        return false;
    };
    auto call_from_top = [&](std::size_t k) {
        const Frame& top = stack.back();
        const auto& f = p.functions[top.fn];
        const auto& c = f.clauses[top.clause];
        const Call& call = c.body.calls[k];
        std::vector<std::string> vals;
        for (const auto& a : call.args) vals.push_back(bind(c, top.args, a, top.y));
        return push(p.index_of(call.function), std::move(vals), call_label(f.name, top.clause + 1, k + 1));
    };

    if (!push(p.index_of(p.entry), args, "")) return r;
    while (!stack.empty()) {
        Frame& top = stack.back();
        const Clause& c = p.functions[top.fn].clauses[top.clause];
        const Body& b = c.body;
        std::optional<std::string> out;
        bool called = false;
        switch (b.kind) {
            case Body::Kind::Simple:
                out = bind(c, top.args, b.value, top.y);
                break;
            case Body::Kind::Tail:
                if (top.phase == 0) {
                    top.phase = 1;
                    called = true;
                    if (!call_from_top(0)) return r;
                } else {
                    out = ret;
                }
                break;
            case Body::Kind::Conditional:
                if (top.phase == 0) {
                    top.phase = 1;
                    called = true;
                    if (!call_from_top(0)) return r;
                } else if (top.phase == 1) {
                    top.phase = 2;
                    called = true;
                    if (!call_from_top(ret->empty() ? 2 : 1)) return r;
                } else {
                    out = ret;
                }
                break;
            case Body::Kind::Let:
                if (top.phase == 0) {
                    top.phase = 1;
                    called = true;
                    if (!call_from_top(0)) return r;
                } else if (top.phase == 1) {
                    top.phase = 2;
                    top.y = *ret;
                    called = true;
                    if (!call_from_top(1)) return r;
                } else {
                    out = ret;
                }
                break;
        }
        if (called) continue;
        stack.pop_back();
        ret = out;
    }
    r.value = ret;
    return r;
}

// ---------------------------------------------------------------------------
// Abstraction
// ---------------------------------------------------------------------------

namespace detail {

// Relation between parameter i (pattern alpha) and argument j (actual beta), as
// string lengths, or nothing for the cases the table leaves open.
inline std::optional<Strictness> table(const Pattern& alpha, int i, const Actual& beta, bool& equal) {
    equal = false;
    const bool betaEps = beta.prefix.empty() && !beta.var && !beta.letVar;
    const bool betaSelf = beta.prefix.empty() && beta.var == i;
    switch (alpha.kind) {
        case Pattern::Kind::Eps:
            if (betaEps) {
                equal = true;
                return Strictness::NonStrict;
            }
            return std::nullopt;
        case Pattern::Kind::Var:
        case Pattern::Kind::Any:
            if (betaEps) return Strictness::NonStrict;
            if (betaSelf) {
                equal = true;
                return Strictness::NonStrict;
            }
            return std::nullopt;
        case Pattern::Kind::Cons:
            if (betaEps || betaSelf) return Strictness::Strict;
            if (beta.prefix.size() == 1 && !beta.var && !beta.letVar) return Strictness::NonStrict;
            if (beta.prefix.size() == 1 && beta.var == i) {
                equal = true;
                return Strictness::NonStrict;
            }
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace detail

/// One point per function with variables x1..xn, the argument lengths, plus a
/// constant 0 below all of them (lengths are never negative); one transition per
/// call expression, labelled f.<clause>.<k>. The entry point is initial.
inline Cts abstract(const Program& p) {
    Cts out;
    std::vector<std::string> vars;
    for (int i = 1; i <= p.arity; ++i) vars.push_back("x" + std::to_string(i));
    vars.push_back(mcbound::detail::fresh_name(vars, "0"));
    const int zero = p.arity + 1;
    for (const auto& f : p.functions) {
        const PointId id = out.add_point(f.name, vars, f.name == p.entry);
        for (int i = 1; i <= p.arity; ++i) out.add_invariant(id, src(i), src(zero), Strictness::NonStrict);
    }
    for (std::size_t fi = 0; fi < p.functions.size(); ++fi) {
        const auto& f = p.functions[fi];
        for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
            const auto& c = f.clauses[ci];
            for (std::size_t k = 0; k < c.body.calls.size(); ++k) {
                const auto& call = c.body.calls[k];
                McGraph g(static_cast<PointId>(fi), out.point_id(call.function), zero, zero);
                g.add_equal(src(zero), tgt(zero));
                for (int i = 1; i <= p.arity; ++i) {
                    for (int j = 1; j <= p.arity; ++j) {
                        bool equal = false;
                        const auto s = detail::table(c.params[static_cast<std::size_t>(i - 1)], i,
                                                     call.args[static_cast<std::size_t>(j - 1)], equal);
                        if (!s) continue;
                        if (equal) {
                            g.add_equal(src(i), tgt(j));
                        } else {
                            g.add(src(i), tgt(j), *s);
                        }
                    }
                }
                out.add_transition(call_label(f.name, ci + 1, k + 1), std::move(g));
            }
        }
    }
    return out;
}

/// Replays recorded call edges through the abstraction with string lengths as
/// values. Returns the first edge that violates its constraint, if any.
inline std::optional<std::size_t> check_simulation(const Cts& abs, const RunResult& r) {
    for (std::size_t e = 0; e < r.trace.size(); ++e) {
        const auto& ev = r.trace[e];
        if (ev.label.empty()) continue;
        const auto& g = abs.transition(ev.label).mc;
        if (abs.point(g.source()).id != ev.caller || abs.point(g.target()).id != ev.callee) return e;
        auto value = [&](VarNode v) {
            const auto& xs = v.side == Side::Source ? ev.callerArgs : ev.args;
            if (static_cast<std::size_t>(v.index) > xs.size()) return std::int64_t{0};
            return static_cast<std::int64_t>(xs[static_cast<std::size_t>(v.index - 1)].size());
        };
        for (int u = 0; u < g.node_count(); ++u) {
            for (int v = 0; v < g.node_count(); ++v) {
                const auto s = g.node_relation(u, v);
                if (!s) continue;
                const auto a = value(g.var(u));
                const auto b = value(g.var(v));
                if (*s == Strictness::Strict ? !(a > b) : !(a >= b)) return e;
            }
        }
    }
    return std::nullopt;
}

inline std::string render_value(const std::optional<std::string>& v) {
    if (!v) return "HALT";
    return v->empty() ? "eps" : *v;
}

}  // namespace mcbound::sfpl
