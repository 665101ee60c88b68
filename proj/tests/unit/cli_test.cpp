#include "smforge/cli.hpp"
#include "smforge/files.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <unistd.h>

namespace fs = std::filesystem;
using smforge::cli::run;

namespace {

const fs::path kModels = SMFORGE_MODELS_DIR;

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("smforge_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name, const std::string& contents) const {
        smforge::cli::writeFileAtomic(path / name, contents);
        return (path / name).string();
    }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::size_t lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

const char* kPreconditionModel = R"(interface I {
    event go
    op Move(a : real)
}
machine M requires I {
    var speed : real = 1.0
    initial state A { during Move(speed) }
    state B { during Move(speed) }
    transition A -> B on go / speed := -1.0
}
operation Move(a : real) pre a > 0.0 {
    initial state S
    final state F
    transition S -> F
}
)";

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("check") {
        auto r = invoke({"check", (kModels / "aggregation.rcm").string()});
        CHECK(r.code == 0);
        r = invoke({"check", (kModels / "taxis.rcm").string(), "--format", "json"});
        CHECK(r.code == 0);
        CHECK(r.out.rfind("[", 0) == 0);

        TempDir dir;
        auto text = smforge::cli::readFile(kModels / "aggregation.rcm");
        const auto at = text.find("on seeRobot");
        REQUIRE(at != std::string::npos);
        text.insert(at + 11, " [1.0]");
        r = invoke({"check", dir.file("bad.rcm", text)});
        CHECK(r.code == 1);
        CHECK(r.out.find("E03") != std::string::npos);

        r = invoke({"check", dir / "missing.rcm"});
        CHECK(r.code == 2);
    }

    TEST_CASE("compile is deterministic") {
        TempDir dir;
        const auto model = (kModels / "aggregation.rcm").string();
        REQUIRE(invoke({"compile", model, "--machine", "AggregationFSM", "-o", dir / "a.smir.json"}).code == 0);
        REQUIRE(invoke({"compile", model, "--machine", "AggregationFSM", "-o", dir / "b.smir.json"}).code == 0);
        CHECK(smforge::cli::readFile(dir / "a.smir.json") == smforge::cli::readFile(dir / "b.smir.json"));

        auto r = invoke({"compile", model, "--machine", "Nope", "-o", dir / "c.smir.json"});
        CHECK(r.code == 1);
        CHECK_FALSE(fs::exists(dir / "c.smir.json"));
        CHECK(invoke({"compile", model, "--machine", "AggregationFSM", "-o", dir / "no/such/dir/x.json"}).code == 2);
    }

    TEST_CASE("codegen") {
        TempDir dir;
        auto r = invoke({"codegen", (kModels / "taxis.rcm").string(), "--machine", "SwarmTaxisFSM", "-o", dir / "gen"});
        CHECK(r.code == 0);
        std::size_t files = 0;
        for (const auto& e : fs::directory_iterator(dir / "gen")) files += e.is_regular_file();
        CHECK(files >= 2);

        r = invoke({"codegen", dir.file("empty.rcm", "// nothing\n"), "--machine", "M", "-o", dir / "gen2"});
        CHECK(r.code == 1);
        CHECK(r.err.find("nothing to generate") != std::string::npos);
    }

    TEST_CASE("run alternates states") {
        TempDir dir;
        const auto ir = dir / "agg.smir.json";
        REQUIRE(invoke({"compile", (kModels / "aggregation.rcm").string(), "--machine", "AggregationFSM", "-o", ir}).code == 0);
        std::string script;
        for (int c = 0; c < 6; ++c)
            script += "{\"cycle\":" + std::to_string(c) + ",\"events\":[\"" + (c % 2 ? "seeWall" : "seeRobot") + "\"]}\n";
        const auto events = dir.file("events.ndjson", script);

        auto r = invoke({"run", ir, "--script", events, "--max-cycles", "8", "-o", dir / "trace.ndjson"});
        CHECK(r.code == 0);
        const auto trace = smforge::cli::readFile(dir / "trace.ndjson");
        CHECK(lines(trace) == 8);
        CHECK(trace.find("\"S2\"") != std::string::npos);

        r = invoke({"run", ir, "--script", events, "--max-cycles", "0", "-o", dir / "empty.ndjson"});
        CHECK(r.code == 0);
        CHECK(smforge::cli::readFile(dir / "empty.ndjson").empty());

        const auto badEvents = dir.file("bad.ndjson", "{\"cycle\":0,\"events\":[\"fly\"]}\n");
        CHECK(invoke({"run", ir, "--script", badEvents, "--max-cycles", "3", "-o", dir / "t2.ndjson"}).code == 1);
        CHECK(invoke({"run", ir, "--script", dir / "none.ndjson", "--max-cycles", "3", "-o", dir / "t3.ndjson"}).code == 2);

        auto corrupt = smforge::cli::readFile(ir);
        corrupt[corrupt.find("S1") + 1] = '9';
        CHECK(invoke({"run", dir.file("bad.smir.json", corrupt), "--script", events, "--max-cycles", "3", "-o",
                       dir / "t4.ndjson"})
                  .code == 1);
    }

    TEST_CASE("run reports a runtime fault") {
        TempDir dir;
        const auto model = dir.file("pre.rcm", kPreconditionModel);
        REQUIRE(invoke({"compile", model, "--machine", "M", "-o", dir / "m.smir.json"}).code == 0);
        const auto events = dir.file("e.ndjson", "{\"cycle\":2,\"events\":[\"go\"]}\n");
        auto r = invoke({"run", dir / "m.smir.json", "--script", events, "--max-cycles", "10", "-o", dir / "t.ndjson"});
        CHECK(r.code == 3);
        CHECK(r.err.find("preconditionViolation Move") != std::string::npos);
        CHECK(lines(smforge::cli::readFile(dir / "t.ndjson")) == 4);
    }

    TEST_CASE("sim") {
        TempDir dir;
        const auto scenario = dir.file("s.json", R"({
            "arena": {"w_cm": 250, "h_cm": 250}, "robots": 5, "seed": 3, "duration_s": 4,
            "controller": "aggregation", "outputs": {"metrics": "m.csv"}})");
        auto r = invoke({"sim", scenario, "--seed", "17"});
        CHECK(r.code == 0);
        CHECK(r.out.find("t_s=4 cluster_fraction=") == 0);
        const auto csv = smforge::cli::readFile(dir / "m.csv");
        CHECK(lines(csv) == 2 + 4);
        CHECK(csv.find("seed=17") != std::string::npos);

        r = invoke({"sim", dir.file("t.json", R"({"controller": "taxis", "duration_s": 1})")});
        CHECK(r.code == 1);
        CHECK(r.err.find("beacon required") != std::string::npos);
        CHECK(invoke({"sim", dir.file("z.json", R"({"duration_s": 0})")}).code == 1);
        CHECK(invoke({"sim", dir.file("k.json", R"({"robts": 3})")}).code == 1);
        CHECK(invoke({"sim", dir / "absent.json"}).code == 2);
    }

    TEST_CASE("usage errors") {
        CHECK(invoke({}).code == 1);
        CHECK(invoke({"check", (kModels / "aggregation.rcm").string(), "--frobnicate"}).code == 1);
        CHECK(invoke({"teleport"}).code == 1);
        CHECK(invoke({"--help"}).code == 0);
    }

    TEST_CASE("log level from the environment") {
        const auto model = (kModels / "aggregation.rcm").string();
        ::setenv("SMFORGE_LOG", "info", 1);
        auto r = invoke({"check", model});
        CHECK(r.err.find("smforge: info:") != std::string::npos);
        ::setenv("SMFORGE_LOG", "error", 1);
        r = invoke({"check", model});
        CHECK(r.err.empty());
        ::setenv("SMFORGE_LOG", "loud", 1);
        r = invoke({"check", model});
        CHECK(r.err.find("ignoring SMFORGE_LOG=loud") != std::string::npos);
        ::unsetenv("SMFORGE_LOG");
    }
}
