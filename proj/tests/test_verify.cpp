#include <doctest.h>

#include <algorithm>

#include "bsx/verify.hpp"

using namespace bsx::verify;

TEST_CASE("suite registry") {
  const auto& names = suite_names();
  CHECK(names.size() == 5);
  CHECK(std::find(names.begin(), names.end(), "esseen_k") != names.end());
  CHECK_THROWS_AS(run_suite("nope"), std::invalid_argument);
}

TEST_CASE("interpolation suite passes with default tolerances") {
  const auto checks = run_suite("interpolation");
  CHECK(checks.size() >= 10);
  for (const auto& c : checks) {
    INFO(c.name << " measured " << c.measured << " tol " << c.tolerance);
    CHECK(c.suite == "interpolation");
    CHECK(c.pass);
    CHECK(c.pass == (c.measured <= c.tolerance));
  }
}

TEST_CASE("an unattainable tolerance fails residual checks") {
  SuiteOptions o;
  o.tol = 1e-300;
  const auto checks = run_suite("esseen1d", o);
  for (const auto& c : checks) CHECK(c.tolerance == 1e-300);
  CHECK(std::any_of(checks.begin(), checks.end(), [](const Check& c) { return !c.pass; }));
}

TEST_CASE("esseen1d suite is identical serially and in parallel") {
  SuiteOptions s, p;
  s.exec = bsx::Exec::serial;
  p.exec = bsx::Exec::parallel;
  const auto a = run_suite("esseen1d", s);
  const auto b = run_suite("esseen1d", p);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    CHECK(a[i].measured == b[i].measured);
    CHECK(a[i].pass);
  }
}
