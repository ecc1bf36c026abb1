#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "ergocube/system_io.hpp"
#include "ergocube/joinings.hpp"

using namespace ergocube;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "ergocube_cli_test.out";
  const std::string cmd = std::string(ERGOCUBE_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

}  // namespace

TEST_CASE("analyze") {
  auto z4 = run("analyze --builtin z4-diagonal");
  CHECK(z4.code == 0);
  const auto doc = nlohmann::json::parse(z4.out);
  CHECK(doc["magic"] == false);
  CHECK(doc["counterexample"].is_string());
  const auto prod = nlohmann::json::parse(run("analyze --builtin product-2x3").out);
  CHECK(prod["magic"] == true);
  CHECK(prod["ergodic"] == true);
  CHECK(prod["free"] == true);
  const auto one = nlohmann::json::parse(run("analyze --builtin one-point").out);
  CHECK(one["magic"] == true);
  CHECK(one["ergodic"] == true);
  CHECK(one["free"] == true);
}

TEST_CASE("average CSV") {
  auto r = run("average --builtin z4-diagonal --kind fourfold --observable 1,0,-1,0 --schedule 4,8,16");
  CHECK(r.code == 0);
  CHECK(r.out == "N,value,reference,abs_error\n4,1/8,1/8,0/1\n8,1/8,1/8,0/1\n16,1/8,1/8,0/1\n");
  auto c = run("average --builtin grid-2x3 --kind cubic --observable 1,1,1,1,1,1 --schedule 1,3,7");
  CHECK(c.out == "N,value,reference,abs_error\n1,1/1,,\n3,1/1,,\n7,1/1,,\n");
  // byte-identical reruns, including the floating-point torus path
  const std::string torus = "average --builtin torus-sqrt23 --kind cubic --trig '[[1,0.5,0]]' --schedule pow2:4..8 --block-size 8";
  auto t1 = run(torus), t2 = run(torus);
  CHECK(t1.code == 0);
  CHECK(t1.out == t2.out);
  CHECK(run(torus + " --threads 2").out == t1.out);
}

TEST_CASE("exit codes") {
  CHECK(run("analyze --builtin nope").code == 1);
  CHECK(run("analyze").code == 1);
  CHECK(run("average --builtin z4-diagonal --schedule 8,4 --observable 1,0,0,0").code == 1);
  CHECK(run("average --builtin z4-diagonal --observable 1,0").code == 1);
  CHECK(run("extend --builtin product-2x3 --out /dev/null").code == 0);
  CHECK(run("extend --seed 3 --family union").code == 1);
  CHECK(run("verify --trials 3 --bound-constant 1/2 --suite bound").code == 2);
  auto vac = run("verify --trials 0");
  CHECK(vac.code == 0);
  CHECK(vac.out.find("warning") != std::string::npos);
  CHECK(run("average --builtin torus-sqrt23 --trig '[[1,0.5,0]]' --schedule 16 --tolerance 1e-9").code == 2);
}

TEST_CASE("extend writes a reusable system") {
  const fs::path out = fs::temp_directory_path() / "ergocube_ext.json";
  CHECK(run("extend --builtin z4-diagonal --out " + out.string()).code == 0);
  const FiniteMPS ext = read_system(out);
  CHECK(ext.size() == 16);
  CHECK(system_from_json(system_to_json(ext)) == ext);
  const auto doc = nlohmann::json::parse(run("analyze --system " + out.string()).out);
  CHECK(doc["magic"] == true);
  CHECK(doc["free"] == true);
  CHECK(doc["ergodic"] == true);
  CHECK(run("extend --builtin one-point --out " + out.string()).code == 0);
  CHECK(read_system(out).size() == 1);
}

TEST_CASE("cube and verify") {
  CHECK(run("cube --identify 2,3").code == 0);
  auto c = run("cube --builtin z4-diagonal --schedule 4,16");
  CHECK(c.out == "N,value,reference,abs_error\n4,0/1,0/1,0/1\n16,0/1,0/1,0/1\n");
  CHECK(run("verify --trials 10").code == 0);
}
