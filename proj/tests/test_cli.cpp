#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "mcbound/cli.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kFixtures = MCBOUND_FIXTURES;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "mcbound");
    std::ostringstream out;
    std::ostringstream err;
    const int code = mcbound::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

class TempDir {
public:
    TempDir()
        : path_(fs::temp_directory_path() /
                ("mcbound_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++))) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    void write(const std::string& name, const std::string& text) const { std::ofstream(path_ / name) << text; }
    void copy_fixture(const std::string& name) const { fs::copy_file(fixture(name), path_ / name); }

private:
    static inline int counter_ = 0;
    fs::path path_;
};

}  // namespace

TEST(Cli, TerminatesExitCodes) {
    auto r = run({"terminates", fixture("empty.cts")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "YES\n");
    r = run({"terminates", fixture("ackermann.cts")});
    EXPECT_EQ(r.code, 0);
}

TEST(Cli, AckermannIsNotBoundedAndPrintsALasso) {
    const auto r = run({"bounded", fixture("ackermann.cts")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out.rfind("NO\n", 0), 0u);
    EXPECT_NE(r.out.find("terminates: yes"), std::string::npos);
    EXPECT_NE(r.out.find("loop: "), std::string::npos);
}

TEST(Cli, BoundedReportsHeight) {
    const auto r = run({"bounded", fixture("fig2.cts")});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("height: O("), std::string::npos);
}

TEST(Cli, RbAtPoint) {
    const auto r = run({"rb", fixture("fig2.cts"), "--point", "w"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("degree: 2\n"), std::string::npos);
    EXPECT_NE(r.out.find("bound: Theta(N^2)"), std::string::npos);
    EXPECT_NE(r.out.find("level 2: "), std::string::npos);
    EXPECT_NE(r.out.find("ranking: <"), std::string::npos);
}

TEST(Cli, RbDegreeQuery) {
    auto r = run({"rb", fixture("fig2.cts"), "--point", "w", "--degree", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("rbd(2): yes"), std::string::npos);
    r = run({"rb", fixture("fig2.cts"), "--point", "w", "--degree", "3"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("rbd(3): no"), std::string::npos);
}

TEST(Cli, RbWithoutBoundExitsOne) {
    const auto r = run({"rb", fixture("ackermann.cts")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("exists: no"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({"rb", fixture("fig2.cts"), "--degree", "2"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"rb", fixture("fig2.cts"), "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, InputErrors) {
    auto r = run({"bounded", fixture("does_not_exist.cts")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("does_not_exist"), std::string::npos);
    TempDir d;
    d.write("bad.cts", "point p(x\n");
    EXPECT_EQ(run({"parse", (d.path() / "bad.cts").string()}).code, 2);
    EXPECT_EQ(run({"rb", fixture("fig2.cts"), "--point", "nowhere"}).code, 2);
}

TEST(Cli, ResourceCaps) {
    auto r = run({"bounded", fixture("fig2.cts"), "--max-elab-points", "3"});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("limit 3"), std::string::npos);
    ::setenv("MCBOUND_MAX_ELAB", "3", 1);
    r = run({"bounded", fixture("fig2.cts")});
    ::unsetenv("MCBOUND_MAX_ELAB");
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(run({"run-sfpl", fixture("equality.sfpl"), "--args", "0101,0101", "--fuel", "2"}).code, 3);
}

TEST(Cli, JsonLines) {
    const auto r = run({"rb", fixture("fig2.cts"), "--format", "json-lines"});
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    int rows = 0;
    for (std::string line; std::getline(in, line); ++rows) {
        const auto j = nlohmann::json::parse(line);
        EXPECT_EQ(j["kind"], "rb");
        EXPECT_TRUE(j.contains("point"));
        EXPECT_EQ(j["degree"], 2);
        EXPECT_TRUE(j["certificateRef"].is_string());
    }
    EXPECT_EQ(rows, 2);

    const auto b = nlohmann::json::parse(run({"bounded", fixture("ackermann.cts"), "--format", "json-lines"}).out);
    EXPECT_EQ(b["verdict"], "no");
    EXPECT_TRUE(b["certificateRef"].is_string());
}

TEST(Cli, OutputIsDeterministic) {
    for (const char* cmd : {"rb", "bounded", "dump-closure"}) {
        const auto a = run({cmd, fixture("simple_multiple_dep.cts")});
        const auto b = run({cmd, fixture("simple_multiple_dep.cts")});
        EXPECT_EQ(a.out, b.out) << cmd;
    }
}

TEST(Cli, ParseRoundTrip) {
    const auto r = run({"parse", fixture("fig1.cts")});
    ASSERT_EQ(r.code, 0);
    TempDir d;
    d.write("again.cts", r.out);
    EXPECT_EQ(run({"validate", (d.path() / "again.cts").string()}).out, r.out);
}

TEST(Cli, DumpClosure) {
    const auto full = run({"dump-closure", fixture("fig1.cts")});
    const auto bounded = run({"dump-closure", fixture("fig1.cts"), "--bounded"});
    ASSERT_EQ(full.code, 0);
    EXPECT_NE(full.out.find("(idempotent)"), std::string::npos);
    EXPECT_NE(full.out.find(" elements\n"), std::string::npos);
    EXPECT_NE(full.out, bounded.out);
}

TEST(Cli, Rank) {
    auto r = run({"rank", fixture("fig1.cts"), "--point", "p"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("check: ok"), std::string::npos);
    r = run({"rank", fixture("ackermann.cts"), "--point", "ack"});
    EXPECT_EQ(r.code, 1);
}

TEST(Cli, Oracle) {
    auto r = run({"oracle", fixture("fig2.cts"), "--N", "3", "--point", "w"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("visits w: 13\n"), std::string::npos);
    EXPECT_NE(r.out.find("cyclic: no"), std::string::npos);

    TempDir d;
    const auto csv = (d.path() / "samples.csv").string();
    r = run({"oracle", fixture("fig2.cts"), "--N", "2", "--point", "w", "--fit", "2,4,6,8", "--csv", csv});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("fit: slope "), std::string::npos);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "N,count");
    EXPECT_EQ(run({"oracle", fixture("fig2.cts"), "--N", "-1"}).code, 2);
    EXPECT_EQ(run({"oracle", fixture("fig2.cts"), "--N", "6", "--max-states", "10"}).code, 3);
}

TEST(Cli, Sfpl) {
    auto r = run({"run-sfpl", fixture("equality.sfpl"), "--args", "01,01"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("result: 1\n"), std::string::npos);
    EXPECT_NE(r.out.find("max stack height: 3\n"), std::string::npos);
    r = run({"run-sfpl", fixture("equality.sfpl"), "--args", "0,1"});
    EXPECT_NE(r.out.find("result: eps\n"), std::string::npos);

    r = run({"abstract-sfpl", fixture("equality.sfpl")});
    ASSERT_EQ(r.code, 0);
    EXPECT_NO_THROW(mcbound::parse_cts(r.out));
    r = run({"rb", fixture("equality.sfpl"), "--point", "f"});
    EXPECT_NE(r.out.find("degree: 1\n"), std::string::npos);
}

TEST(Cli, CorpusOnFixtures) {
    const auto r = run({"corpus", kFixtures});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("EXPECTED-FAIL-PASS"), std::string::npos);
    EXPECT_EQ(r.out.find(" FAIL\n"), std::string::npos);
}

TEST(Cli, CorpusEdgeCases) {
    TempDir d;
    auto r = run({"corpus", d.path().string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0/0 rows pass"), std::string::npos);

    EXPECT_EQ(run({"corpus", (d.path() / "missing").string()}).code, 2);

    d.copy_fixture("fig1.cts");
    d.copy_fixture("fig1.expect");
    d.write("broken.cts", "point p(x\n");
    d.write("broken.expect", "bounded: yes\n");
    d.write("orphan.expect", "bounded: yes\n");
    d.write("wrong.cts", "point p(x) initial\ntrans t: p -> p: x > x'\n");
    d.write("wrong.expect", "# x never meets a floor\nbounded: yes\n");
    r = run({"corpus", d.path().string(), "--format", "json-lines"});
    EXPECT_EQ(r.code, 1);
    std::map<std::string, std::string> status;
    std::istringstream in(r.out);
    for (std::string line; std::getline(in, line);) {
        const auto j = nlohmann::json::parse(line);
        status[j["fixture"].get<std::string>() + "/" + j["expected"].get<std::string>()] = j["status"];
    }
    EXPECT_EQ(status["broken/bounded: yes"], "ERROR");
    EXPECT_EQ(status["orphan/(fixture)"], "ERROR");
    EXPECT_EQ(status["wrong/bounded: yes"], "FAIL");
    EXPECT_EQ(status["fig1/rb p: 1"], "PASS");
}
