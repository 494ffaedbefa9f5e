#include "doctest.h"
#include "helpers.hpp"

#include "noveltree/cli/config.hpp"
#include "noveltree/errors.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace noveltree;
using testing::TempDir;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

// Runs the CLI with `args`, capturing stdout.
Run run_cli(const std::string &args, const fs::path &scratch) {
    const auto capture = scratch / "stdout.txt";
    const std::string cmd = std::string(NOVELTREE_CLI) + " " + args + " > " + capture.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream in(capture);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("config rejects unknown keys and bad values") {
    CHECK_THROWS_AS(cli::config_from_json({{"domian", "blocksworld"}}), ConfigError);
    CHECK_THROWS_AS(cli::config_from_json({{"tot", {{"max_depht", 3}}}}), ConfigError);
    CHECK_THROWS_AS(cli::config_from_json({{"llm", {{"retry", {{"attempts", 3}}}}}}), ConfigError);
    CHECK_THROWS_AS(cli::config_from_json({{"tot", {{"max_depth", 0}}}}), ConfigError);
    CHECK_THROWS_AS(cli::config_from_json({{"oracle", {{"kind", "psychic"}}}}), ConfigError);
    CHECK_THROWS_AS(cli::config_from_json({{"oracle", {{"error_rate", 2.0}}}}), ConfigError);
    CHECK_THROWS_AS(cli::config_from_json({{"domain", "chess"}}), ConfigError);
    CHECK_NOTHROW(cli::config_from_json(nlohmann::json::object()));
}

TEST_CASE("config round trips through its resolved form") {
    auto c = cli::config_from_json({{"domain", "game24"},
                                    {"seed", 9},
                                    {"tot", {{"traversal", "bfs"}, {"novelty_pruning", true}, {"max_depth", 4}}},
                                    {"oracle", {{"kind", "noisy"}, {"error_rate", 0.1}}},
                                    {"prompts", {{"catalog", "extended"}, {"style", "pddl"}}}});
    const auto j = cli::to_json(c);
    const auto back = cli::config_from_json(j);
    CHECK(cli::to_json(back) == j);
    CHECK(cli::config_hash(back) == cli::config_hash(c));
    CHECK(cli::config_hash(c).size() == 8);
    c.seed = 10;
    CHECK(cli::config_hash(c) != cli::config_hash(back));
    CHECK(back.tot.traversal == tot::Traversal::bfs);
    CHECK(back.tot.max_depth == 4);
}

TEST_CASE("generate is deterministic") {
    TempDir dir("gen");
    REQUIRE(run_cli("generate blocksworld --n 5 --blocks 4 --seed 7 --out " + (dir.path / "a").string(), dir.path).code == 0);
    REQUIRE(run_cli("generate blocksworld --n 5 --blocks 4 --seed 7 --out " + (dir.path / "b").string(), dir.path).code == 0);
    int files = 0;
    for (const auto &e : fs::directory_iterator(dir.path / "a")) {
        if (e.path().filename() == "config.json") continue;
        ++files;
        CHECK_MESSAGE(slurp(e.path()) == slurp(dir.path / "b" / e.path().filename()), e.path().string());
    }
    CHECK(files == 5 + 2); // problems, domain.pddl, manifest.json

    REQUIRE(run_cli("generate game24 --count 100 --seed 1 --out " + (dir.path / "g").string(), dir.path).code == 0);
    const auto rows = lines(slurp(dir.path / "g" / "instances.txt"));
    REQUIRE(rows.size() == 100);
    for (const auto &row : rows) {
        std::istringstream in(row);
        int x, count = 0;
        while (in >> x) ++count;
        CHECK(count == 4);
    }
    CHECK(run_cli("generate blocksworld --blocks 0 --out " + (dir.path / "bad").string(), dir.path).code == 2);
}

TEST_CASE("analyze-width reports width 0 for goal-at-start problems") {
    TempDir dir("width");
    const auto probs = dir.path / "p";
    REQUIRE(run_cli("generate blocksworld --n 3 --blocks 3 --seed 2 --out " + probs.string(), dir.path).code == 0);
    std::ofstream(probs / "trivial.pddl") << "(define (problem trivial) (:domain blocksworld)\n"
                                             "  (:objects a b - block)\n"
                                             "  (:init (on a b) (ontable b) (clear a) (handempty))\n"
                                             "  (:goal (and (on a b))))\n";
    const auto out = dir.path / "w";
    REQUIRE(run_cli("analyze-width " + probs.string() + " --out " + out.string(), dir.path).code == 0);
    const auto rows = lines(slurp(out / "widths.csv"));
    REQUIRE(rows.size() == 5);
    bool found = false;
    for (const auto &r : rows)
        if (r.rfind("trivial,0,", 0) == 0) found = true;
    CHECK(found);

    int total = 0;
    for (const auto &r : lines(slurp(out / "hist_width.csv"))) {
        if (r.rfind("width", 0) == 0) continue;
        total += std::stoi(r.substr(r.find(',') + 1));
    }
    CHECK(total == 4);
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK(summary.is_object());
    CHECK(fs::exists(out / "config.json"));
}

TEST_CASE("solve exit codes") {
    TempDir dir("solve");
    const auto probs = dir.path / "p";
    REQUIRE(run_cli("generate blocksworld --n 1 --blocks 4 --seed 3 --out " + probs.string(), dir.path).code == 0);
    const auto problem = (probs / "bw-001.pddl").string();

    auto iw = run_cli("solve " + problem + " --engine iw --k 2 --out " + (dir.path / "iw").string(), dir.path);
    CHECK(iw.code == 0);
    const auto result = nlohmann::json::parse(slurp(dir.path / "iw" / "result.json"));
    CHECK(result["solved"] == true);

    auto tot = run_cli("solve " + problem + " --engine tot --oracle exact --pruning on --out " + (dir.path / "tot").string(),
                   dir.path);
    CHECK(tot.code == 0);
    CHECK(fs::exists(dir.path / "tot" / "transcript.jsonl"));

    auto shallow = run_cli("solve " + problem + " --engine tot --depth 1 --out " + (dir.path / "d1").string(), dir.path);
    CHECK(shallow.code == 1);
    CHECK(nlohmann::json::parse(slurp(dir.path / "d1" / "result.json"))["reason"] == "depth_exhausted");

    CHECK(run_cli("solve " + problem + " --engine warp", dir.path).code == 2);
    std::ofstream(dir.path / "bad.json") << R"({"nonsense": true})";
    CHECK(run_cli("--config " + (dir.path / "bad.json").string() + " solve " + problem, dir.path).code == 2);

    auto g24 = run_cli("solve \"4 9 10 13\" --domain game24 --engine iw --out " + (dir.path / "g").string(), dir.path);
    CHECK(g24.code == 0);

    auto offline = run_cli("solve " + problem + " --engine tot --oracle llm --endpoint http://127.0.0.1:1/v1 --model m --out " +
                           (dir.path / "llm").string(),
                       dir.path);
    CHECK(offline.code == 3);
}

TEST_CASE("eval prints the exact self-test score") {
    TempDir dir("eval");
    const auto run = run_cli("eval plan-verify --oracle exact --n 50 --seed 4 --out " + (dir.path / "e").string(), dir.path);
    CHECK(run.code == 0);
    CHECK(run.out.find("50/50") != std::string::npos);
    CHECK(fs::exists(dir.path / "e" / "instances.jsonl"));
}
