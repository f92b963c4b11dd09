#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using json = nlohmann::ordered_json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + (env.empty() ? "" : " ") + std::string(BSX_BIN) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("eval prints a CSV row with an error estimate") {
  const auto r = run("eval --fn W --x 0.5");
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "x,value,err_est");
  CHECK(ls[1].rfind("0.5,0.81056946913870", 0) == 0);

  const auto k = run("eval --fn K --x 1");
  CHECK(k.code == 0);
  CHECK(lines(k.out).at(1).rfind("1,0,", 0) == 0);
}

TEST_CASE("table of B") {
  const auto r = run("table --fn B --from -3 --to 3 --step 0.5");
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 14);
  CHECK(ls[7].rfind("0,1,", 0) == 0);
}

TEST_CASE("JSON eval output") {
  const auto r = run("eval --fn lambda --format json");
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  for (const char* key : {"manifest", "checks", "bounds", "measurements", "verdicts", "runtime_ms"}) CHECK(j.contains(key));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("eval --fn nope --x 1").code == 2);
  CHECK(run("verify --suite nope").code == 2);
  CHECK(run("demo --scenario nope").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("table --fn B --format xml").code == 2);
}

TEST_CASE("verify exit codes") {
  const auto ok = run("verify --suite interpolation");
  CHECK(ok.code == 0);
  const auto j = json::parse(ok.out);
  CHECK(j["checks"].size() >= 10);
  CHECK(run("verify --suite esseen1d --tol 1e-300").code == 1);
}

TEST_CASE("verify kernels and all") {
  CHECK(run("verify --suite kernels").code == 0);
  CHECK(run("verify --suite kernels --tol 1e-300").code == 1);
  const auto all = run("verify --suite all");
  CHECK(all.code == 0);
  CHECK(json::parse(all.out)["checks"].size() >= 30);
}

TEST_CASE("downward constant overrides need --unsafe") {
  CHECK(run("demo --scenario esseen1d-binomial --n 25 --omega 8 --c1 0.1").code == 2);
  const auto r = run("demo --scenario esseen1d-binomial --n 25 --omega 8 --c1 0.1 --unsafe");
  CHECK(r.code != 2);
  CHECK(run("demo --scenario esseen1d-binomial --n 25 --omega 8 --c1 0.5").code == 0);
}

TEST_CASE("esseen1d demo") {
  const auto r = run("demo --scenario esseen1d-binomial --n 100 --omega 20");
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  REQUIRE(!j["verdicts"].empty());
  for (const auto& v : j["verdicts"]) CHECK(v["pass"].get<bool>());
}

TEST_CASE("esseen-k demo reduces to one variable for k = 1") {
  const auto r = run("demo --scenario esseen-k --k 1 --n 64 --omega 15");
  CHECK(r.code == 0);
}

TEST_CASE("clt-haar demo is deterministic") {
  const std::string args = "demo --scenario clt-haar --N 400 --samples 100000 --seed 7";
  auto a = json::parse(run(args).out);
  auto b = json::parse(run(args).out);
  bool found = false;
  for (const auto& v : a["verdicts"]) {
    CHECK(v["pass"].get<bool>());
    if (v["name"] == "gap <= proof bound") {
      found = true;
      CHECK(v["rhs"].get<double>() == doctest::Approx(1.0 / 30.0));
    }
  }
  CHECK(found);
  a.erase("runtime_ms");
  b.erase("runtime_ms");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("config file through the environment") {
  const std::string path = "bsx_test_config.toml";
  {
    std::ofstream f(path);
    f << "fn = \"K\"\nx = 0.5\n";
  }
  const auto r = run("eval", "BSX_CONFIG=" + path);
  CHECK(r.code == 0);
  CHECK(lines(r.out).at(1).rfind("0.5,0.405284734569351", 0) == 0);
  std::remove(path.c_str());
}

TEST_CASE("output file") {
  const std::string path = "bsx_test_out.csv";
  CHECK(run("table --fn K --from 0 --to 1 --step 0.25 --out " + path).code == 0);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(lines(ss.str()).size() == 6);
  std::remove(path.c_str());
}
