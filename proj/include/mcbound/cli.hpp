#pragma once

// Command-line front end. run() is the whole program; tools/mcbound.cpp only
// forwards argv so the tests can drive it in-process.
//
// Exit codes: 0 yes/ok, 1 no (or a corpus mismatch), 2 usage or input error,
// 3 resource cap hit.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcbound/closure.hpp"
#include "mcbound/cts.hpp"
#include "mcbound/errors.hpp"
#include "mcbound/oracle.hpp"
#include "mcbound/rbound.hpp"
#include "mcbound/sfpl.hpp"
#include "mcbound/termination.hpp"

namespace mcbound::cli {

enum Exit : int { kYes = 0, kNo = 1, kInputError = 2, kResourceCap = 3 };

enum class Format { Text, JsonLines };

struct Common {
    Format format = Format::Text;
    Limits limits;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingFixture("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// A .sfpl file is abstracted first; anything else is CTS text.
inline Cts load_system(const std::string& path) {
    const std::string text = read_file(path);
    if (std::filesystem::path(path).extension() == ".sfpl") return sfpl::abstract(sfpl::parse_sfpl(text));
    return parse_cts(text);
}

inline std::string join(const std::vector<std::string>& xs, const std::string& sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
    return out;
}

inline std::vector<std::string> labels_of(const Cts& c, const std::vector<std::size_t>& ts) {
    std::vector<std::string> out;
    for (auto t : ts) out.push_back(c.transitions()[t].label);
    return out;
}

inline void print_lasso(std::ostream& out, const Analysis& a, const LassoWitness& w) {
    out << "witness:\n";
    out << "  point: " << a.elaborated().cts.point(w.point).id << "\n";
    out << "  stem: " << (w.stem_labels.empty() ? "(empty)" : join(w.stem_labels)) << "\n";
    out << "  loop: " << join(w.loop_labels) << "\n";
}

inline std::string lasso_ref(const Analysis& a, const LassoWitness& w) {
    return a.elaborated().cts.point(w.point).id + "|" + join(w.stem_labels) + "|" + join(w.loop_labels);
}

// Points of the input system, the instrumentation's entry point left out.
inline std::vector<PointId> input_points(const Analysis& a) {
    std::vector<PointId> out;
    for (PointId p = 0; p < a.original().point_count(); ++p) out.push_back(p);
    return out;
}

inline std::string certificate_ref(const Analysis& a, const RbReport& r) {
    if (!r.certificate) return "unreachable";
    std::string out = a.elaborated().cts.point(r.point).id;
    for (const auto& g : r.certificate->graphs) out += "|" + join(labels_of(a.bounded_system(), g.witness));
    return out;
}

inline void print_certificate(std::ostream& out, const Analysis& a, const RbReport& r) {
    if (!r.certificate) {
        out << "certificate: none (unreachable)\n";
        return;
    }
    const auto& names = a.bounded_system().point(r.point).vars;
    out << "certificate: " << a.elaborated().cts.point(r.point).id << "\n";
    const auto& lp = r.certificate->lp;
    for (int h = lp.depth; h >= 1; --h) {
        std::vector<std::string> vars;
        for (int i = 1; i <= lp.n(); ++i) {
            if (lp.level[static_cast<std::size_t>(i - 1)] != h) continue;
            vars.push_back(names[static_cast<std::size_t>(i - 1)] +
                           (lp.direction[static_cast<std::size_t>(i - 1)] < 0 ? " down" : " up"));
        }
        const auto& g = r.certificate->graphs[static_cast<std::size_t>(h - 1)];
        out << "  level " << h << ": " << join(vars, ", ") << "\n";
        out << "    G" << h << ": " << render_relations(g.mc, names, names) << "\n";
        out << "    via: " << join(labels_of(a.bounded_system(), g.witness)) << "\n";
    }
    out << "ranking: " << emit_ranking(lp, names) << "\n";
}

inline nlohmann::json verdict_json(const std::string& kind, const std::string& file) {
    nlohmann::json j;
    j["kind"] = kind;
    j["file"] = file;
    j["point"] = nullptr;
    j["degree"] = nullptr;
    j["certificateRef"] = nullptr;
    return j;
}

inline int cmd_parse(const Common& opt, const std::string& file, std::ostream& out) {
    const Cts c = load_system(file);
    if (opt.format == Format::JsonLines) {
        auto j = verdict_json("parse", file);
        j["points"] = c.point_count();
        j["transitions"] = c.transitions().size();
        j["warnings"] = c.warnings;
        out << j.dump() << "\n";
    } else {
        out << render_cts(c);
        for (const auto& w : c.warnings) out << "# warning: " << w << "\n";
    }
    return kYes;
}

inline int cmd_terminates(const Common& opt, const std::string& file, std::ostream& out) {
    const Analysis a(load_system(file), opt.limits);
    const auto* e = find_omega_loop(a.full_closure(), false);
    std::optional<LassoWitness> w;
    if (e) w = a.lasso(e->mc.source(), e->witness);
    if (opt.format == Format::JsonLines) {
        auto j = verdict_json("terminates", file);
        j["verdict"] = e ? "no" : "yes";
        if (w) {
            j["point"] = a.elaborated().cts.point(w->point).id;
            j["certificateRef"] = lasso_ref(a, *w);
        }
        out << j.dump() << "\n";
    } else {
        out << (e ? "NO" : "YES") << "\n";
        if (w) print_lasso(out, a, *w);
    }
    return e ? kNo : kYes;
}

inline int cmd_bounded(const Common& opt, const std::string& file, std::ostream& out) {
    const Analysis a(load_system(file), opt.limits);
    const auto v = decide_bounded_termination(a);
    if (v.witness && !check_lasso(a, *v.witness)) throw InconsistentCertificate("lasso witness failed its re-check");
    if (opt.format == Format::JsonLines) {
        auto j = verdict_json("bounded", file);
        j["verdict"] = v.boundedTerminating ? "yes" : "no";
        j["terminates"] = v.terminating ? "yes" : "no";
        j["height"] = v.heightBoundNote;
        if (v.witness) {
            j["point"] = a.elaborated().cts.point(v.witness->point).id;
            j["certificateRef"] = lasso_ref(a, *v.witness);
        }
        out << j.dump() << "\n";
    } else {
        out << (v.boundedTerminating ? "YES" : "NO") << "\n";
        out << "terminates: " << (v.terminating ? "yes" : "no") << "\n";
        out << "height: " << v.heightBoundNote << "\n";
        if (v.witness) print_lasso(out, a, *v.witness);
    }
    return v.boundedTerminating ? kYes : kNo;
}

inline int cmd_rb(const Common& opt, const std::string& file, const std::string& point, std::optional<int> degree,
                  std::ostream& out) {
    const Analysis a(load_system(file), opt.limits);
    std::vector<PointId> points;
    if (point.empty()) {
        points = input_points(a);
    } else {
        points.push_back(a.original().point_id(point));
    }
    bool all = true;
    for (PointId p : points) {
        const std::string id = a.original().point(p).id;
        const RbReport r = origin_report(a, p);
        std::optional<bool> atLeast;
        if (degree && r.exists) {
            atLeast = false;
            for (PointId v : a.elaborated().variants_of(p)) atLeast = *atLeast || rbd(a, v, *degree).has_value();
        }
        if (atLeast) all = all && *atLeast;
        all = all && r.exists;
        if (opt.format == Format::JsonLines) {
            auto j = verdict_json("rb", file);
            j["point"] = id;
            j["exists"] = r.exists;
            if (r.degree) j["degree"] = *r.degree;
            if (r.exists) {
                j["bound"] = r.bound;
                j["certificateRef"] = certificate_ref(a, r);
            }
            if (atLeast) j["atLeast"] = {{"degree", *degree}, {"holds", *atLeast}};
            out << j.dump() << "\n";
            continue;
        }
        out << "point: " << id << "\n";
        out << "exists: " << (r.exists ? "yes" : "no") << "\n";
        if (!r.exists) continue;
        out << "degree: " << *r.degree << "\n";
        out << "bound: " << r.bound << "\n";
        if (atLeast) out << "rbd(" << *degree << "): " << (*atLeast ? "yes" : "no") << "\n";
        print_certificate(out, a, r);
    }
    return all ? kYes : kNo;
}

inline int cmd_rank(const Common& opt, const std::string& file, const std::string& point, std::ostream& out) {
    const Analysis a(load_system(file), opt.limits);
    const RbReport r = origin_report(a, a.original().point_id(point));
    if (!r.exists || !r.certificate) {
        if (opt.format == Format::JsonLines) {
            auto j = verdict_json("rank", file);
            j["point"] = point;
            j["ranking"] = nullptr;
            out << j.dump() << "\n";
        } else {
            out << "point: " << point << "\nranking: none (" << (r.exists ? "unreachable" : "no reachability bound")
                << ")\n";
        }
        return r.exists ? kYes : kNo;
    }
    check_ranking(*r.certificate);
    const auto ranking = emit_ranking(r.certificate->lp, a.bounded_system().point(r.point).vars);
    if (opt.format == Format::JsonLines) {
        auto j = verdict_json("rank", file);
        j["point"] = point;
        j["degree"] = *r.degree;
        j["certificateRef"] = certificate_ref(a, r);
        j["ranking"] = ranking;
        out << j.dump() << "\n";
    } else {
        out << "point: " << point << "\n";
        out << "at: " << a.elaborated().cts.point(r.point).id << "\n";
        out << "ranking: " << ranking << "\n";
        out << "check: ok\n";
    }
    return kYes;
}

inline int cmd_dump_closure(const Common& opt, const std::string& file, bool bounded, std::ostream& out) {
    const Analysis a(load_system(file), opt.limits);
    const ClosureSet& cs = bounded ? a.bounded_closure() : a.full_closure();
    const Cts& sys = bounded ? a.bounded_system() : a.elaborated().cts;
    for (const auto& e : cs.elements()) {
        const auto& s = sys.point(e.mc.source());
        const auto& t = sys.point(e.mc.target());
        const bool idem = e.mc.source() == e.mc.target() && is_idempotent(e.mc);
        if (opt.format == Format::JsonLines) {
            nlohmann::json j;
            j["kind"] = "closure";
            j["source"] = s.id;
            j["target"] = t.id;
            j["relations"] = render_relations(e.mc, s.vars, t.vars);
            j["idempotent"] = idem;
            j["witness"] = labels_of(sys, e.witness);
            out << j.dump() << "\n";
        } else {
            out << s.id << " -> " << t.id << ": " << render_relations(e.mc, s.vars, t.vars);
            out << "  # via " << join(labels_of(sys, e.witness)) << (idem ? " (idempotent)" : "") << "\n";
        }
    }
    if (opt.format == Format::Text) out << "# " << cs.size() << " elements\n";
    return kYes;
}

inline std::string count_text(std::uint64_t v) { return v == kUnboundedCount ? "inf" : std::to_string(v); }

inline int cmd_oracle(const Common& opt, const std::string& file, Value N, std::optional<Value> pad,
                      const std::string& point, const std::vector<Value>& fit, const std::string& csv,
                      std::size_t maxStates, std::ostream& out) {
    const Cts c = load_system(file);
    std::optional<PointId> p;
    if (!point.empty()) p = c.point_id(point);
    auto measure = [&](const OracleResult& r) { return p ? r.visits[*p] : r.height; };
    const OracleResult r = explore(c, {N, pad, maxStates});
    std::vector<std::pair<Value, std::uint64_t>> samples;
    for (Value n : fit) samples.push_back({n, measure(explore(c, {n, pad, maxStates}))});
    std::optional<DegreeFit> f;
    if (!samples.empty()) f = fit_degree(samples);
    if (!csv.empty()) {
        std::ofstream o(csv);
        o << "N,count\n";
        for (auto [n, k] : samples) o << n << "," << count_text(k) << "\n";
    }
    if (opt.format == Format::JsonLines) {
        auto j = verdict_json("oracle", file);
        j["N"] = N;
        j["states"] = r.states;
        j["cyclic"] = r.cyclic;
        j["height"] = r.cyclic ? nlohmann::json(nullptr) : nlohmann::json(r.height);
        if (p) {
            j["point"] = point;
            j["visits"] = r.cyclic ? nlohmann::json(nullptr) : nlohmann::json(r.visits[*p]);
        }
        if (f) j["fit"] = {{"slope", f->slope}, {"maxResidual", f->maxResidual}};
        out << j.dump() << "\n";
        return kYes;
    }
    out << "N: " << N << "\n";
    out << "pad: " << (pad ? *pad : 2 * N) << "\n";
    out << "states: " << r.states << "\n";
    out << "cyclic: " << (r.cyclic ? "yes" : "no") << "\n";
    out << "height: " << count_text(r.height) << "\n";
    for (PointId q = 0; q < c.point_count(); ++q) {
        if (p && q != *p) continue;
        out << "visits " << c.point(q).id << ": " << count_text(r.visits[q]) << "\n";
    }
    if (!r.trace.empty()) {
        out << "trace:";
        for (const auto& s : r.trace) {
            out << " " << c.point(s.point).id << "(";
            for (std::size_t i = 0; i < s.values.size(); ++i) out << (i ? "," : "") << s.values[i];
            out << ")";
        }
        out << "\n";
    }
    if (f) {
        out << "samples:";
        for (auto [n, k] : samples) out << " " << n << ":" << count_text(k);
        out << "\n" << std::fixed << std::setprecision(3);
        out << "fit: slope " << f->slope << " max residual " << f->maxResidual << "\n";
    }
    return kYes;
}

inline int cmd_abstract_sfpl(const std::string& file, std::ostream& out) {
    out << render_cts(sfpl::abstract(sfpl::parse_sfpl(read_file(file))));
    return kYes;
}

inline int cmd_run_sfpl(const Common& opt, const std::string& file, const std::vector<std::string>& rawArgs,
                        std::size_t fuel, std::ostream& out) {
    const auto p = sfpl::parse_sfpl(read_file(file));
    std::vector<std::string> args;
    for (const auto& a : rawArgs) args.push_back(a == "eps" ? "" : a);
    const auto r = sfpl::interpret(p, args, fuel, false);
    if (opt.format == Format::JsonLines) {
        nlohmann::json j;
        j["kind"] = "run-sfpl";
        j["file"] = file;
        j["result"] = r.value ? nlohmann::json(*r.value) : nlohmann::json(nullptr);
        j["halted"] = !r.value;
        j["maxStackHeight"] = r.maxStackHeight;
        j["calls"] = r.calls;
        out << j.dump() << "\n";
    } else {
        out << "result: " << sfpl::render_value(r.value) << "\n";
        out << "max stack height: " << r.maxStackHeight << "\n";
        out << "calls: " << r.calls << "\n";
    }
    return kYes;
}

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

struct CorpusRow {
    std::string fixture;
    std::string expected;
    std::string actual;
    std::string status;  // PASS, FAIL, EXPECTED-FAIL-PASS, ERROR
    std::string point;
    std::optional<int> degree;
    std::string certificateRef;
};

struct CorpusReport {
    std::vector<CorpusRow> rows;
    bool ok() const {
        return std::all_of(rows.begin(), rows.end(),
                           [](const CorpusRow& r) { return r.status == "PASS" || r.status == "EXPECTED-FAIL-PASS"; });
    }
};

namespace detail {

inline std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline void run_fixture(const std::string& name, const std::filesystem::path& source, const std::filesystem::path& expect,
                        const Limits& limits, std::vector<CorpusRow>& rows) {
    std::vector<std::string> lines;
    {
        std::istringstream in(read_file(expect.string()));
        for (std::string line; std::getline(in, line);) {
            line = trim(line.substr(0, line.find('#')));
            if (!line.empty()) lines.push_back(line);
        }
    }
    std::optional<Analysis> a;
    std::string error;
    try {
        a.emplace(load_system(source.string()), limits);
    } catch (const std::exception& e) {
        error = e.what();
    }
    for (const auto& line : lines) {
        CorpusRow row{name, line, "", "FAIL", "", std::nullopt, ""};
        if (!a) {
            row.actual = error;
            row.status = "ERROR";
            rows.push_back(row);
            continue;
        }
        try {
            const auto colon = line.find(':');
            const std::string key = trim(line.substr(0, colon));
            const std::string want = colon == std::string::npos ? "" : trim(line.substr(colon + 1));
            if (key == "terminates") {
                row.actual = "terminates: " + std::string(decide_termination(*a) ? "yes" : "no");
            } else if (key == "bounded") {
                const auto v = decide_bounded_termination(*a);
                if (v.witness) {
                    if (!check_lasso(*a, *v.witness)) throw InconsistentCertificate("lasso witness failed its re-check");
                    row.certificateRef = lasso_ref(*a, *v.witness);
                }
                row.actual = "bounded: " + std::string(v.boundedTerminating ? "yes" : "no");
            } else if (key.rfind("rb ", 0) == 0) {
                row.point = trim(key.substr(3));
                const auto r = origin_report(*a, a->original().point_id(row.point));
                row.degree = r.degree;
                if (r.exists) row.certificateRef = certificate_ref(*a, r);
                row.actual = "rb " + row.point + ": " + (r.exists ? std::to_string(*r.degree) : "none");
            } else if (key == "expected-fail") {
                if (want != "no-bound") throw PreconditionError("unknown expected-fail kind '" + want + "'");
                bool noBound = false;
                for (PointId p : input_points(*a)) noBound = noBound || !origin_report(*a, p).exists;
                row.actual = noBound ? "no-bound" : "bound";
                row.status = noBound ? "EXPECTED-FAIL-PASS" : "FAIL";
                rows.push_back(row);
                continue;
            } else {
                throw PreconditionError("unknown expectation '" + line + "'");
            }
            row.status = row.actual == key + ": " + want ? "PASS" : "FAIL";
        } catch (const std::exception& e) {
            row.actual = e.what();
            row.status = "ERROR";
        }
        rows.push_back(row);
    }
}

}  // namespace detail

/// Every <name>.expect in dir paired with <name>.cts or <name>.sfpl. Rows are
/// sorted by fixture name, then in sidecar order.
inline CorpusReport run_corpus(const std::string& dir, const Limits& limits = {}) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw MissingFixture("corpus directory '" + dir + "' does not exist");
    std::vector<fs::path> sidecars;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".expect") sidecars.push_back(e.path());
    }
    std::sort(sidecars.begin(), sidecars.end());
    CorpusReport rep;
    for (const auto& sc : sidecars) {
        const std::string name = sc.stem().string();
        fs::path source;
        for (const char* ext : {".cts", ".sfpl"}) {
            fs::path candidate = sc;
            candidate.replace_extension(ext);
            if (fs::exists(candidate)) {
                source = candidate;
                break;
            }
        }
        if (source.empty()) {
            rep.rows.push_back({name, "(fixture)", "missing .cts or .sfpl source", "ERROR", "", std::nullopt, ""});
            continue;
        }
        detail::run_fixture(name, source, sc, limits, rep.rows);
    }
    return rep;
}

inline int cmd_corpus(const Common& opt, const std::string& dir, std::ostream& out) {
    const auto rep = run_corpus(dir, opt.limits);
    if (opt.format == Format::JsonLines) {
        for (const auto& r : rep.rows) {
            nlohmann::json j;
            j["kind"] = "corpus";
            j["fixture"] = r.fixture;
            j["expected"] = r.expected;
            j["actual"] = r.actual;
            j["status"] = r.status;
            j["point"] = r.point.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.point);
            j["degree"] = r.degree ? nlohmann::json(*r.degree) : nlohmann::json(nullptr);
            j["certificateRef"] = r.certificateRef.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.certificateRef);
            out << j.dump() << "\n";
        }
    } else {
        std::size_t w0 = 7;
        std::size_t w1 = 8;
        std::size_t w2 = 6;
        for (const auto& r : rep.rows) {
            w0 = std::max(w0, r.fixture.size());
            w1 = std::max(w1, r.expected.size());
            w2 = std::max(w2, std::min<std::size_t>(r.actual.size(), 60));
        }
        auto cell = [](const std::string& s, std::size_t w) {
            std::string t = s.size() > 60 ? s.substr(0, 57) + "..." : s;
            return t + std::string(w > t.size() ? w - t.size() : 0, ' ');
        };
        out << cell("fixture", w0) << "  " << cell("expected", w1) << "  " << cell("actual", w2) << "  status\n";
        for (const auto& r : rep.rows) {
            out << cell(r.fixture, w0) << "  " << cell(r.expected, w1) << "  " << cell(r.actual, w2) << "  " << r.status
                << "\n";
        }
        const auto passed = std::count_if(rep.rows.begin(), rep.rows.end(), [](const CorpusRow& r) {
            return r.status == "PASS" || r.status == "EXPECTED-FAIL-PASS";
        });
        out << passed << "/" << rep.rows.size() << " rows pass\n";
    }
    return rep.ok() ? kYes : kNo;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline std::size_t env_max_elab() {
    if (const char* v = std::getenv("MCBOUND_MAX_ELAB")) {
        try {
            return static_cast<std::size_t>(std::stoull(v));
        } catch (const std::exception&) {
            throw PreconditionError("MCBOUND_MAX_ELAB must be a non-negative integer");
        }
    }
    return kDefaultMaxElabPoints;
}

inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bounds for monotonicity constraint transition systems", "mcbound"};
    app.require_subcommand(1);

    std::string format = "text";
    std::size_t maxElab = 0;
    std::size_t maxClosure = kDefaultMaxClosure;
    std::string file;
    std::string point;
    std::optional<int> degree;
    bool bounded = false;
    Value N = 0;
    std::optional<Value> pad;
    std::vector<Value> fit;
    std::string csv;
    std::size_t maxStates = OracleConfig{}.maxStates;
    std::vector<std::string> args;
    std::size_t fuel = sfpl::kDefaultFuel;

    auto analysis = [&](CLI::App* sub) {
        sub->add_option("--format", format, "text or json-lines")->check(CLI::IsMember({"text", "json-lines"}));
        sub->add_option("--max-elab-points", maxElab, "cap on elaborated points (MCBOUND_MAX_ELAB)");
        sub->add_option("--max-closure", maxClosure, "cap on closure elements");
    };

    auto* parse = app.add_subcommand("parse", "parse and print the canonical form");
    parse->alias("validate");
    parse->add_option("file", file)->required();
    analysis(parse);

    auto* terminates = app.add_subcommand("terminates", "decide termination");
    terminates->add_option("file", file)->required();
    analysis(terminates);

    auto* boundedCmd = app.add_subcommand("bounded", "decide bounded termination");
    boundedCmd->add_option("file", file)->required();
    analysis(boundedCmd);

    auto* rb = app.add_subcommand("rb", "reachability bound degree per point");
    rb->add_option("file", file)->required();
    auto* pointOpt = rb->add_option("--point", point, "point of the input system");
    rb->add_option("--degree", degree, "also decide whether the degree is at least k")->needs(pointOpt);
    analysis(rb);

    auto* rank = app.add_subcommand("rank", "lexicographic ranking function at a point");
    rank->add_option("file", file)->required();
    rank->add_option("--point", point)->required();
    analysis(rank);

    auto* dump = app.add_subcommand("dump-closure", "closure elements with witnesses");
    dump->add_option("file", file)->required();
    dump->add_flag("--bounded", bounded, "closure of the bounded restriction");
    analysis(dump);

    auto* oracle = app.add_subcommand("oracle", "exhaustive finite-domain exploration");
    oracle->add_option("file", file)->required();
    oracle->add_option("--N", N, "x_max - x_min")->required()->check(CLI::NonNegativeNumber);
    oracle->add_option("--pad", pad, "domain slack (default 2N)")->check(CLI::NonNegativeNumber);
    oracle->add_option("--point", point, "report visits of this point");
    oracle->add_option("--fit", fit, "fit the degree over these N")->delimiter(',');
    oracle->add_option("--csv", csv, "write the (N, count) samples here");
    oracle->add_option("--max-states", maxStates);
    oracle->add_option("--format", format)->check(CLI::IsMember({"text", "json-lines"}));

    auto* abstractSfpl = app.add_subcommand("abstract-sfpl", "print the abstraction of an SFPL program");
    abstractSfpl->add_option("file", file)->required();

    auto* runSfpl = app.add_subcommand("run-sfpl", "run an SFPL program");
    runSfpl->add_option("file", file)->required();
    runSfpl->add_option("--args", args, "comma-separated arguments, eps for the empty string")
        ->delimiter(',')
        ->required();
    runSfpl->add_option("--fuel", fuel, "maximum number of calls");
    runSfpl->add_option("--format", format)->check(CLI::IsMember({"text", "json-lines"}));

    auto* corpus = app.add_subcommand("corpus", "check every fixture against its .expect sidecar");
    corpus->add_option("dir", file)->required();
    analysis(corpus);

    try {
        std::vector<std::string> reversed(argv.rbegin(), argv.rend() - 1);
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kYes;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kYes;
    } catch (const CLI::ParseError& e) {
        err << "mcbound: " << e.what() << "\n";
        return kInputError;
    }

    try {
        Common opt;
        opt.format = format == "json-lines" ? Format::JsonLines : Format::Text;
        opt.limits.maxElabPoints = maxElab ? maxElab : env_max_elab();
        opt.limits.maxClosure = maxClosure;
        if (parse->parsed()) return cmd_parse(opt, file, out);
        if (terminates->parsed()) return cmd_terminates(opt, file, out);
        if (boundedCmd->parsed()) return cmd_bounded(opt, file, out);
        if (rb->parsed()) return cmd_rb(opt, file, point, degree, out);
        if (rank->parsed()) return cmd_rank(opt, file, point, out);
        if (dump->parsed()) return cmd_dump_closure(opt, file, bounded, out);
        if (oracle->parsed()) return cmd_oracle(opt, file, N, pad, point, fit, csv, maxStates, out);
        if (abstractSfpl->parsed()) return cmd_abstract_sfpl(file, out);
        if (runSfpl->parsed()) return cmd_run_sfpl(opt, file, args, fuel, out);
        if (corpus->parsed()) return cmd_corpus(opt, file, out);
    } catch (const ResourceLimit& e) {
        err << "mcbound: " << e.what() << " (limit " << e.limit() << ")\n";
        return kResourceCap;
    } catch (const FuelExhausted& e) {
        err << "mcbound: " << e.what() << "\n";
        return kResourceCap;
    } catch (const std::exception& e) {
        err << "mcbound: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace mcbound::cli
