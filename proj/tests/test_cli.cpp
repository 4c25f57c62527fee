#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace {

std::string ws(const std::string& name) {
  return std::string(OPCAL_WORKSPACE_DIR) + "/" + name;
}

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + std::string(OPCAL_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

} // namespace

TEST_CASE("batch workspaces run all commands and report success") {
  RunResult r = run_cli(ws("basic.json"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"pass\": true") != std::string::npos);
  CHECK(r.out.find("\"pass\": false") == std::string::npos);

  RunResult e = run_cli(ws("explicit.json"));
  CHECK(e.exit_code == 0);
}

TEST_CASE("single commands run against a workspace") {
  RunResult r = run_cli(ws("basic.json") + " check operad Com --bound 3");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"command\": \"check\"") != std::string::npos);

  RunResult c = run_cli(ws("basic.json") + " compose Com Com --m-bound 3 --arity-bound 4");
  CHECK(c.exit_code == 0);
  CHECK(c.out.find("\"grades\"") != std::string::npos);
}

TEST_CASE("failed checks exit with status one") {
  RunResult r = run_cli(ws("bad_unit.json"));
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("malformed workspaces and bad usage exit with status two") {
  CHECK(run_cli(ws("bad_descent.json")).exit_code == 2);
  CHECK(run_cli(ws("undefined_ref.json")).exit_code == 2);
  CHECK(run_cli(ws("basic.json") + " frobnicate").exit_code == 2);
  CHECK(run_cli(ws("basic.json") + " check operad Com").exit_code == 2);
  CHECK(run_cli(ws("basic.json") + " check operad Nope --bound 2").exit_code == 2);
  CHECK(run_cli("/nonexistent.json").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  RunResult base = run_cli(ws("basic.json"), "OPCAL_THREADS=1");
  REQUIRE(base.exit_code == 0);
  for (int i = 0; i < 2; ++i) {
    RunResult again = run_cli(ws("basic.json"), "OPCAL_THREADS=1");
    CHECK(again.out == base.out);
  }
  RunResult threaded = run_cli(ws("basic.json"), "OPCAL_THREADS=4");
  CHECK(threaded.exit_code == 0);
  CHECK(threaded.out == base.out);
}
