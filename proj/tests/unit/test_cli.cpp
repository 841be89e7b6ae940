#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const std::string kBin = ATTNDISCO_BIN;
const fs::path kFixtures = ATTNDISCO_FIXTURES;

struct Result {
  int code;
  std::string output;  // stdout and stderr
};

Result sh(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + kBin + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) output.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

std::string fixture(const char* name) { return (kFixtures / name).string(); }

}  // namespace

TEST_CASE("exit codes") {
  CHECK(sh("--help").code == 0);
  CHECK(sh("parse --help").code == 0);
  CHECK(sh("").code == 2);
  CHECK(sh("parse --bogus").code == 2);
  CHECK(sh("parse --input " + fixture("running.json") + " --algo nope").code == 2);
  CHECK(sh("parse --input " + fixture("running.json") + " --head 0 --avg-heads").code == 2);

  auto r = sh("parse --input " + fixture("eight_heads.json") + " --head 99");
  CHECK(r.code == 2);
  CHECK(r.output.find("head 99 out of range 0..7") != std::string::npos);

  r = sh("parse --input " + fixture("running.json") + " --algo cle --avg-heads --layer 0");
  CHECK(r.code == 0);
  CHECK(r.output == "# running\n1\t2\n2\t0\n\n");

  r = sh("parse --input " + fixture("two_sentences.json") + " --algo cky --constraint sentence");
  CHECK(r.output == "# two_sentences\n(?? (?? (leaf 1) (leaf 2)) (leaf 3))\n");

  CHECK(sh("parse --input " + fixture("malformed.json")).code == 2);
  CHECK(sh("parse --input " + fixture("running.json") + " --algo cle --constraint paragraph").code == 2);
  CHECK(sh("eval --pred " + fixture("pair_pred.txt") + " --gold " + fixture("gold_const.txt")).code == 2);
  CHECK(sh("convert --to-dep --input " + fixture("pair_pred.txt")).code == 2);
  CHECK(sh("stats --trees " + fixture("gold_const.txt")).code == 2);
  CHECK(sh("baseline --gold " + fixture("gold_const.txt") + " --runs 0").code == 2);
}

TEST_CASE("score variant flag") {
  const fs::path dir = fs::temp_directory_path() / "attndisco_cli_test";
  fs::create_directories(dir);
  const fs::path doc = dir / "three.json";
  std::FILE* f = std::fopen(doc.c_str(), "w");
  std::fputs(R"({"doc_id": "three", "edus": [{"id": 1, "sent": 0}, {"id": 2, "sent": 0},
    {"id": 3, "sent": 0}], "layers": [{"layer": 0, "heads": [[[0, 0.1, 0.1], [0.1, 0, 0.9],
    [0.1, 0.9, 0]]]}]})", f);
  std::fclose(f);
  auto r = sh("parse --input " + doc.string());
  CHECK(r.output.find("(?? (?? (leaf 1) (leaf 2)) (leaf 3))") != std::string::npos);
  r = sh("parse --input " + doc.string() + " --cky-score-variant halve-links");
  CHECK(r.output.find("(?? (leaf 1) (?? (leaf 2) (leaf 3)))") != std::string::npos);
}

TEST_CASE("seed from the environment") {
  const std::string base = "baseline --gold " + fixture("gold_const.txt") + " --runs 3";
  const auto flag = sh(base + " --seed 17");
  const auto env = sh(base, "ATTNDISCO_SEED=17");
  const auto other = sh(base + " --seed 18");
  CHECK(flag.code == 0);
  CHECK(flag.output == env.output);
  CHECK(flag.output != other.output);
  CHECK(sh(base, "ATTNDISCO_SEED=abc").code == 2);
}

TEST_CASE("oracle flag") {
  const auto r = sh("--oracle --oracle-trials 10 --oracle-max-n 5");
  CHECK(r.code == 0);
  CHECK(r.output.find("PASS cle") != std::string::npos);
  CHECK(r.output.find("FAIL") == std::string::npos);
}
