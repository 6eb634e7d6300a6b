#pragma once

// Constraint transition systems: flow points with invariants, labeled MC
// transitions, the line-oriented text format, invariant saturation, the
// x_max/x_min instrumentation and concrete (finite-domain) transition semantics.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mcbound/errors.hpp"
#include "mcbound/mcgraph.hpp"

namespace mcbound {

struct FlowPoint {
    std::string id;
    std::vector<std::string> vars;
    McGraph invariant;  // source side only: McGraph(p, p, arity, 0)
    bool initial = false;

    int arity() const noexcept { return static_cast<int>(vars.size()); }
};

struct Transition {
    std::string label;
    McGraph mc;
};

class Cts {
public:
    PointId add_point(std::string id, std::vector<std::string> vars, bool initial = false) {
        if (index_.contains(id)) throw SyntaxError("duplicate point '" + id + "'", 0, 0);
        const auto p = static_cast<PointId>(points_.size());
        const int n = static_cast<int>(vars.size());
        index_.emplace(id, p);
        points_.push_back({std::move(id), std::move(vars), McGraph(p, p, n, 0), initial});
        return p;
    }

    void add_invariant(PointId p, VarNode a, VarNode b, Strictness s) {
        if (a.side != Side::Source || b.side != Side::Source) {
            throw UnknownVariable("invariants relate unprimed variables only");
        }
        point_mut(p).invariant.add(a, b, s);
    }

    void set_invariant(PointId p, McGraph inv) {
        if (inv.source() != p || inv.target() != p || inv.source_arity() != arity(p) || inv.target_arity() != 0) {
            throw ArityMismatch("invariant shape does not match point '" + point(p).id + "'");
        }
        point_mut(p).invariant = std::move(inv);
    }

    void set_initial(PointId p, bool initial) { point_mut(p).initial = initial; }

    void add_transition(std::string label, McGraph mc) {
        if (mc.source() >= points_.size() || mc.target() >= points_.size()) {
            throw UnknownPoint("transition '" + label + "' refers to an unknown point");
        }
        if (mc.source_arity() != arity(mc.source()) || mc.target_arity() != arity(mc.target())) {
            throw ArityMismatch("transition '" + label + "' does not match its endpoint arities");
        }
        if (labels_.contains(label)) throw SyntaxError("duplicate transition label '" + label + "'", 0, 0);
        labels_.emplace(label, transitions_.size());
        transitions_.push_back({std::move(label), std::move(mc)});
    }

    std::size_t point_count() const noexcept { return points_.size(); }
    const std::vector<FlowPoint>& points() const noexcept { return points_; }
    const FlowPoint& point(PointId p) const {
        if (p >= points_.size()) throw UnknownPoint("point index " + std::to_string(p));
        return points_[p];
    }
    int arity(PointId p) const { return point(p).arity(); }

    std::optional<PointId> find_point(std::string_view id) const {
        auto it = index_.find(std::string(id));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    PointId point_id(std::string_view id) const {
        if (auto p = find_point(id)) return *p;
        throw UnknownPoint("unknown point '" + std::string(id) + "'");
    }

    const std::vector<Transition>& transitions() const noexcept { return transitions_; }

    const Transition& transition(std::string_view label) const {
        auto it = labels_.find(std::string(label));
        if (it == labels_.end()) throw UnknownTransition("unknown transition '" + std::string(label) + "'");
        return transitions_[it->second];
    }

    std::vector<PointId> initial_points() const {
        std::vector<PointId> out;
        for (PointId p = 0; p < points_.size(); ++p) {
            if (points_[p].initial) out.push_back(p);
        }
        return out;
    }

    int max_arity() const noexcept {
        int n = 0;
        for (const auto& p : points_) n = std::max(n, p.arity());
        return n;
    }

    /// Diagnostics produced by transforms (e.g. dropped transitions).
    std::vector<std::string> warnings;

private:
    FlowPoint& point_mut(PointId p) {
        if (p >= points_.size()) throw UnknownPoint("point index " + std::to_string(p));
        return points_[p];
    }

    std::vector<FlowPoint> points_;
    std::vector<Transition> transitions_;
    std::unordered_map<std::string, PointId> index_;
    std::unordered_map<std::string, std::size_t> labels_;
};

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

namespace detail {

inline bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@' || c == '.';
}

class LineCursor {
public:
    LineCursor(std::string_view text, int line) : text_(text), line_(line) {}

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    bool accept(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
    }

    std::string ident() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        if (pos_ == start) fail("expected identifier");
        return std::string(text_.substr(start, pos_ - start));
    }

    bool peek_ident() {
        skip_ws();
        return pos_ < text_.size() && ident_char(text_[pos_]);
    }

    int column() const noexcept { return static_cast<int>(pos_) + 1; }
    int line() const noexcept { return line_; }

    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, line_, column()); }

private:
    std::string_view text_;
    int line_;
    std::size_t pos_ = 0;
};

struct RawOperand {
    std::string name;
    bool primed = false;
    int column = 0;
};

struct RawRelation {
    RawOperand lhs;
    std::string op;  // one of < <= = >= >
    RawOperand rhs;
};

inline RawOperand parse_operand(LineCursor& cur) {
    cur.skip_ws();
    RawOperand o;
    o.column = cur.column();
    o.name = cur.ident();
    o.primed = cur.accept("'");
    return o;
}

// rel {, rel} where rel is `a op b` or `same(a, b, ...)`.
inline std::vector<RawRelation> parse_relations(LineCursor& cur) {
    std::vector<RawRelation> out;
    if (cur.at_end()) return out;
    do {
        cur.skip_ws();
        const int col = cur.column();
        RawOperand first = parse_operand(cur);
        if (first.name == "same" && !first.primed && cur.accept("(")) {
            if (!cur.accept(")")) {
                do {
                    RawOperand v = parse_operand(cur);
                    if (v.primed) throw SyntaxError("same() takes unprimed names", cur.line(), v.column);
                    RawOperand w = v;
                    w.primed = true;
                    out.push_back({v, "=", w});
                } while (cur.accept(","));
                cur.expect(")");
            }
            continue;
        }
        std::string op;
        for (const char* cand : {"<=", ">=", "<", ">", "="}) {
            if (cur.accept(cand)) {
                op = cand;
                break;
            }
        }
        if (op.empty()) throw SyntaxError("expected relation operator", cur.line(), cur.column());
        RawOperand second = parse_operand(cur);
        (void)col;
        out.push_back({first, op, second});
    } while (cur.accept(","));
    if (!cur.at_end()) cur.fail("unexpected trailing text");
    return out;
}

inline std::string strip_comment(std::string_view line) {
    const auto hash = line.find('#');
    return std::string(hash == std::string_view::npos ? line : line.substr(0, hash));
}

}  // namespace detail

/// Parses the CTS text format. Points may be referenced before their declaration.
inline Cts parse_cts(std::string_view text) {
    struct PendingRel {
        int line;
        std::string pointOrLabel;
        std::string src;
        std::string dst;
        std::vector<detail::RawRelation> rels;
        bool invariant;
        int srcColumn;
        int dstColumn;
    };
    Cts c;
    std::vector<PendingRel> pending;
    std::map<std::string, int> declaredAt;

    std::istringstream in{std::string(text)};
    std::string raw;
    int lineNo = 0;
    while (std::getline(in, raw)) {
        ++lineNo;
        const std::string line = detail::strip_comment(raw);
        detail::LineCursor cur(line, lineNo);
        if (cur.at_end()) continue;
        const std::string kw = cur.ident();
        if (kw == "point") {
            const int idCol = cur.column();
            const std::string id = cur.ident();
            cur.expect("(");
            std::vector<std::string> vars;
            if (!cur.accept(")")) {
                do {
                    cur.skip_ws();
                    const int col = cur.column();
                    std::string v = cur.ident();
                    if (std::find(vars.begin(), vars.end(), v) != vars.end()) {
                        throw SyntaxError("duplicate variable '" + v + "'", lineNo, col);
                    }
                    vars.push_back(std::move(v));
                } while (cur.accept(","));
                cur.expect(")");
            }
            bool initial = false;
            if (!cur.at_end()) {
                const std::string flag = cur.ident();
                if (flag != "initial") throw SyntaxError("expected 'initial'", lineNo, idCol);
                initial = true;
            }
            if (!cur.at_end()) cur.fail("unexpected trailing text");
            if (auto prev = c.find_point(id)) {
                if (c.arity(*prev) != static_cast<int>(vars.size())) {
                    throw ArityMismatch("point '" + id + "' redeclared with a different arity");
                }
                throw SyntaxError("duplicate point '" + id + "'", lineNo, idCol);
            }
            c.add_point(id, std::move(vars), initial);
            declaredAt[id] = lineNo;
        } else if (kw == "invariant") {
            cur.skip_ws();
            const int col = cur.column();
            std::string id = cur.ident();
            cur.expect(":");
            pending.push_back({lineNo, id, id, id, detail::parse_relations(cur), true, col, col});
        } else if (kw == "trans") {
            std::string label = cur.ident();
            cur.expect(":");
            cur.skip_ws();
            const int sc = cur.column();
            std::string s = cur.ident();
            cur.expect("->");
            cur.skip_ws();
            const int dc = cur.column();
            std::string d = cur.ident();
            cur.expect(":");
            pending.push_back({lineNo, std::move(label), std::move(s), std::move(d), detail::parse_relations(cur),
                               false, sc, dc});
        } else {
            throw SyntaxError("unknown statement '" + kw + "'", lineNo, 1);
        }
    }

    auto lookup = [&](const std::string& id, int line, int col) {
        auto p = c.find_point(id);
        if (!p) throw UnknownPoint("unknown point '" + id + "' at " + std::to_string(line) + ":" + std::to_string(col));
        return *p;
    };
    auto var_index = [&](PointId p, const detail::RawOperand& o, int line) {
        const auto& vars = c.point(p).vars;
        auto it = std::find(vars.begin(), vars.end(), o.name);
        if (it == vars.end()) {
            throw UnknownVariable("unknown variable '" + o.name + "' of point '" + c.point(p).id + "' at " +
                                  std::to_string(line) + ":" + std::to_string(o.column));
        }
        return static_cast<int>(it - vars.begin()) + 1;
    };

    for (const auto& pr : pending) {
        const PointId s = lookup(pr.src, pr.line, pr.srcColumn);
        const PointId d = lookup(pr.dst, pr.line, pr.dstColumn);
        McGraph g = pr.invariant ? McGraph(s, s, c.arity(s), 0) : McGraph(s, d, c.arity(s), c.arity(d));
        auto node = [&](const detail::RawOperand& o) {
            if (o.primed) {
                if (pr.invariant) {
                    throw SyntaxError("primed variable in invariant", pr.line, o.column);
                }
                return tgt(var_index(d, o, pr.line));
            }
            return src(var_index(s, o, pr.line));
        };
        for (const auto& r : pr.rels) {
            const VarNode a = node(r.lhs);
            const VarNode b = node(r.rhs);
            if (r.op == ">") g.add(a, b, Strictness::Strict);
            else if (r.op == ">=") g.add(a, b, Strictness::NonStrict);
            else if (r.op == "<") g.add(b, a, Strictness::Strict);
            else if (r.op == "<=") g.add(b, a, Strictness::NonStrict);
            else g.add_equal(a, b);
        }
        if (pr.invariant) {
            McGraph merged = c.point(s).invariant;
            for (int u = 0; u < g.node_count(); ++u) {
                merged.ge_row(u) |= g.ge_row(u);
                merged.gt_row(u) |= g.gt_row(u);
            }
            c.set_invariant(s, merged);
        } else {
            c.add_transition(pr.pointOrLabel, std::move(g));
        }
    }
    for (const auto& p : c.points()) {
        if (!is_satisfiable(p.invariant)) {
            throw UnsatisfiableInvariant("invariant of point '" + p.id + "' is unsatisfiable");
        }
    }
    return c;
}

inline std::string render_transition(const Cts& c, const Transition& t) {
    const auto& s = c.point(t.mc.source());
    const auto& d = c.point(t.mc.target());
    std::string out = "trans " + t.label + ": " + s.id + " -> " + d.id + ":";
    const std::string rels = render_relations(t.mc, s.vars, d.vars);
    if (!rels.empty()) out += " " + rels;
    return out;
}

/// Canonical text: points, then invariants, then transitions, in declaration order.
inline std::string render_cts(const Cts& c) {
    std::string out;
    for (const auto& p : c.points()) {
        out += "point " + p.id + "(";
        for (std::size_t i = 0; i < p.vars.size(); ++i) {
            if (i) out += ",";
            out += p.vars[i];
        }
        out += ")";
        if (p.initial) out += " initial";
        out += "\n";
    }
    for (const auto& p : c.points()) {
        if (p.invariant.empty()) continue;
        out += "invariant " + p.id + ": " + render_relations(p.invariant, p.vars, {}) + "\n";
    }
    for (const auto& t : c.transitions()) out += render_transition(c, t) + "\n";
    return out;
}

/// Structural equality after logical closure of every MC and invariant.
inline bool equivalent(const Cts& a, const Cts& b) {
    if (a.point_count() != b.point_count() || a.transitions().size() != b.transitions().size()) return false;
    for (PointId p = 0; p < a.point_count(); ++p) {
        const auto& x = a.point(p);
        const auto& y = b.point(p);
        if (x.id != y.id || x.vars != y.vars || x.initial != y.initial) return false;
        if (logical_closure(x.invariant) != logical_closure(y.invariant)) return false;
    }
    for (std::size_t k = 0; k < a.transitions().size(); ++k) {
        const auto& x = a.transitions()[k];
        const auto& y = b.transitions()[k];
        if (x.label != y.label || logical_closure(x.mc) != logical_closure(y.mc)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

/// Copies the invariant of `p` onto one side of g (source or target).
inline void add_invariant_to(McGraph& g, const McGraph& inv, Side side) {
    const int n = inv.source_arity();
    for (int u = 1; u <= n; ++u) {
        for (int v = 1; v <= n; ++v) {
            if (auto s = inv.relation(src(u), src(v))) g.add({side, u}, {side, v}, *s);
        }
    }
}

/// Adds I_f to the sources and I_g to the targets of every G: f -> g, closes it,
/// and drops (with a warning) transitions that become unsatisfiable.
inline Cts saturate_invariants(const Cts& c) {
    Cts out;
    for (const auto& p : c.points()) {
        const PointId id = out.add_point(p.id, p.vars, p.initial);
        out.set_invariant(id, logical_closure(p.invariant));
    }
    out.warnings = c.warnings;
    for (const auto& t : c.transitions()) {
        McGraph g = t.mc;
        add_invariant_to(g, c.point(g.source()).invariant, Side::Source);
        add_invariant_to(g, c.point(g.target()).invariant, Side::Target);
        g = logical_closure(g);
        if (g.has_strict_self_loop()) {
            out.warnings.push_back("transition '" + t.label + "' dropped: unsatisfiable under the point invariants");
            continue;
        }
        out.add_transition(t.label, std::move(g));
    }
    return out;
}

struct InstrumentedCts {
    Cts cts;
    PointId f0 = 0;

    /// 1-based positions of x_max and x_min at point p (always the last two).
    int max_index(PointId p) const { return cts.arity(p) - 1; }
    int min_index(PointId p) const { return cts.arity(p); }
    /// Number of variables the point had before instrumentation.
    int original_arity(PointId p) const { return cts.arity(p) - 2; }
};

namespace detail {

inline std::string fresh_name(const std::vector<std::string>& taken, std::string base) {
    while (std::find(taken.begin(), taken.end(), base) != taken.end()) base += "_";
    return base;
}

inline std::string fresh_point_id(const Cts& c, std::string base) {
    while (c.find_point(base)) base += "_";
    return base;
}

}  // namespace detail

/// Appends x_max, x_min to every point, adds the initial point f0 whose invariant
/// sandwiches every variable between them, links f0 to the old initial points
/// and threads x_max = x_max', x_min = x_min' through every transition.
inline InstrumentedCts instrument(const Cts& c) {
    InstrumentedCts ic;
    Cts& out = ic.cts;
    out.warnings = c.warnings;
    for (const auto& p : c.points()) {
        auto vars = p.vars;
        vars.push_back(detail::fresh_name(p.vars, "xmax"));
        vars.push_back(detail::fresh_name(p.vars, "xmin"));
        const PointId id = out.add_point(p.id, vars, false);
        McGraph inv(id, id, p.arity() + 2, 0);
        add_invariant_to(inv, p.invariant, Side::Source);
        out.set_invariant(id, inv);
    }

    const auto initials = c.initial_points();
    int k = 0;
    for (PointId p : initials) k = std::max(k, c.arity(p));
    std::vector<std::string> f0vars;
    if (initials.size() == 1) {
        f0vars = c.point(initials.front()).vars;
    } else {
        for (int i = 1; i <= k; ++i) f0vars.push_back("x" + std::to_string(i));
    }
    const auto f0base = f0vars;
    f0vars.push_back(detail::fresh_name(f0base, "xmax"));
    f0vars.push_back(detail::fresh_name(f0base, "xmin"));
    ic.f0 = out.add_point(detail::fresh_point_id(c, "f0"), f0vars, true);
    McGraph inv0(ic.f0, ic.f0, k + 2, 0);
    for (int j = 1; j <= k; ++j) {
        inv0.add(src(k + 1), src(j), Strictness::NonStrict);
        inv0.add(src(j), src(k + 2), Strictness::NonStrict);
    }
    inv0.add(src(k + 1), src(k + 2), Strictness::NonStrict);
    out.set_invariant(ic.f0, inv0);

    auto thread_bounds = [](McGraph& g) {
        const int a = g.source_arity();
        const int b = g.target_arity();
        g.add_equal(src(a - 1), tgt(b - 1));
        g.add_equal(src(a), tgt(b));
    };

    for (const auto& t : c.transitions()) {
        McGraph g(t.mc.source(), t.mc.target(), t.mc.source_arity() + 2, t.mc.target_arity() + 2);
        for (const auto& arc : t.mc.arcs()) g.add(arc.from, arc.to, arc.strictness);
        thread_bounds(g);
        out.add_transition(t.label, std::move(g));
    }
    std::set<std::string> labels;
    for (const auto& t : c.transitions()) labels.insert(t.label);
    for (PointId p : initials) {
        const int n = c.arity(p);
        McGraph g(ic.f0, p, k + 2, n + 2);
        for (int i = 1; i <= n; ++i) g.add_equal(src(i), tgt(i));
        add_invariant_to(g, inv0, Side::Source);
        thread_bounds(g);
        std::string label = "init." + c.point(p).id;
        while (labels.contains(label)) label += "_";
        labels.insert(label);
        out.add_transition(label, logical_closure(g));
    }
    return ic;
}

/// saturate, instrument, saturate again: the form every analysis starts from.
inline InstrumentedCts prepare(const Cts& c) {
    InstrumentedCts ic = instrument(saturate_invariants(c));
    ic.cts = saturate_invariants(ic.cts);
    return ic;
}

// ---------------------------------------------------------------------------
// Concrete semantics over finite domains
// ---------------------------------------------------------------------------

using Value = std::int64_t;

struct State {
    PointId point = 0;
    std::vector<Value> values;

    friend bool operator==(const State&, const State&) = default;
    friend auto operator<=>(const State&, const State&) = default;
};

struct ValueRange {
    Value lo = 0;
    Value hi = 0;
};

/// Per-variable value range of a point (index is 1-based).
using Domain = std::function<ValueRange(PointId, int)>;

inline Domain uniform_domain(Value lo, Value hi) {
    return [lo, hi](PointId, int) { return ValueRange{lo, hi}; };
}

/// A transition prepared for successor enumeration: target variables are chosen in
/// index order, each one's range narrowed by the (closed) relations to source
/// variables and to already-chosen targets.
class CompiledTransition {
public:
    explicit CompiledTransition(const McGraph& mc) : closed_(logical_closure(mc)) {
        a_ = closed_.source_arity();
        b_ = closed_.target_arity();
        unsat_ = closed_.has_strict_self_loop();
        for (int u = 1; u <= a_; ++u) {
            for (int v = 1; v <= a_; ++v) {
                if (u == v) continue;
                if (auto s = closed_.relation(src(u), src(v))) guard_.push_back({u - 1, v - 1, *s == Strictness::Strict});
            }
        }
        bounds_.resize(static_cast<std::size_t>(b_));
        for (int k = 1; k <= b_; ++k) {
            auto& bk = bounds_[static_cast<std::size_t>(k - 1)];
            for (int u = 1; u <= a_; ++u) {
                if (auto s = closed_.relation(tgt(k), src(u))) bk.lowerFromSource.push_back({u - 1, *s == Strictness::Strict});
                if (auto s = closed_.relation(src(u), tgt(k))) bk.upperFromSource.push_back({u - 1, *s == Strictness::Strict});
            }
            for (int j = 1; j < k; ++j) {
                if (auto s = closed_.relation(tgt(k), tgt(j))) bk.lowerFromTarget.push_back({j - 1, *s == Strictness::Strict});
                if (auto s = closed_.relation(tgt(j), tgt(k))) bk.upperFromTarget.push_back({j - 1, *s == Strictness::Strict});
            }
        }
    }

    const McGraph& mc() const noexcept { return closed_; }

    bool guard_holds(const Value* s) const noexcept {
        if (unsat_) return false;
        for (const auto& r : guard_) {
            if (r.strict ? !(s[r.u] > s[r.v]) : !(s[r.u] >= s[r.v])) return false;
        }
        return true;
    }

    /// Calls emit(target values) for every target vector within `ranges` satisfying the MC.
    template <class Emit>
    void successors(const Value* s, const std::vector<ValueRange>& ranges, Emit&& emit) const {
        if (!guard_holds(s)) return;
        std::vector<Value> t(static_cast<std::size_t>(b_));
        enumerate(0, s, ranges, t, emit);
    }

private:
    struct Pair {
        int u;
        int v;
        bool strict;
    };
    struct Bound {
        int other;
        bool strict;
    };
    struct TargetBounds {
        std::vector<Bound> lowerFromSource;
        std::vector<Bound> upperFromSource;
        std::vector<Bound> lowerFromTarget;
        std::vector<Bound> upperFromTarget;
    };

    template <class Emit>
    void enumerate(int k, const Value* s, const std::vector<ValueRange>& ranges, std::vector<Value>& t,
                   Emit& emit) const {
        if (k == b_) {
            emit(static_cast<const std::vector<Value>&>(t));
            return;
        }
        const auto& bk = bounds_[static_cast<std::size_t>(k)];
        Value lo = ranges[static_cast<std::size_t>(k)].lo;
        Value hi = ranges[static_cast<std::size_t>(k)].hi;
        for (const auto& b : bk.lowerFromSource) lo = std::max(lo, s[b.other] + (b.strict ? 1 : 0));
        for (const auto& b : bk.upperFromSource) hi = std::min(hi, s[b.other] - (b.strict ? 1 : 0));
        for (const auto& b : bk.lowerFromTarget) lo = std::max(lo, t[static_cast<std::size_t>(b.other)] + (b.strict ? 1 : 0));
        for (const auto& b : bk.upperFromTarget) hi = std::min(hi, t[static_cast<std::size_t>(b.other)] - (b.strict ? 1 : 0));
        for (Value x = lo; x <= hi; ++x) {
            t[static_cast<std::size_t>(k)] = x;
            enumerate(k + 1, s, ranges, t, emit);
        }
    }

    McGraph closed_;
    int a_ = 0;
    int b_ = 0;
    bool unsat_ = false;
    std::vector<Pair> guard_;
    std::vector<TargetBounds> bounds_;
};

/// True iff the values satisfy the point invariant.
inline bool satisfies_invariant(const Cts& c, const State& st) {
    const auto& inv = c.point(st.point).invariant;
    for (int u = 1; u <= inv.source_arity(); ++u) {
        for (int v = 1; v <= inv.source_arity(); ++v) {
            const auto s = inv.relation(src(u), src(v));
            if (!s) continue;
            const Value x = st.values[static_cast<std::size_t>(u - 1)];
            const Value y = st.values[static_cast<std::size_t>(v - 1)];
            if (*s == Strictness::Strict ? !(x > y) : !(x >= y)) return false;
        }
    }
    return true;
}

/// All successors of `state` through the labeled transition with every target value
/// inside `domain`; the target point's invariant must hold too.
inline std::vector<State> concrete_step(const Cts& c, const State& state, std::string_view label,
                                        const Domain& domain) {
    const Transition& t = c.transition(label);
    if (t.mc.source() != state.point) return {};
    if (static_cast<int>(state.values.size()) != c.arity(state.point)) {
        throw ArityMismatch("state arity does not match its point");
    }
    McGraph mc = t.mc;
    add_invariant_to(mc, c.point(mc.target()).invariant, Side::Target);
    const CompiledTransition ct(mc);
    std::vector<ValueRange> ranges;
    for (int k = 1; k <= c.arity(mc.target()); ++k) ranges.push_back(domain(mc.target(), k));
    std::vector<State> out;
    ct.successors(state.values.data(), ranges, [&](const std::vector<Value>& v) { out.push_back({mc.target(), v}); });
    return out;
}

inline std::vector<State> concrete_step(const Cts& c, const State& state, std::string_view label, Value lo,
                                        Value hi) {
    return concrete_step(c, state, label, uniform_domain(lo, hi));
}

}  // namespace mcbound
