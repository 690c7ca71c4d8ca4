// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "sim/presets.hpp"
#include "sim/scenario.hpp"

using namespace dcp;
using namespace dcp::sim;

namespace {

const char* kMinimal = R"(
[config]
node_count = 1
quorum = 1
delta = 0
tau_max = 5
buffer_max = 1
deps_max = 1

[rollups]
count = 1

[[event]]
tick = 0
kind = "publish"
tx = "0:0"

[[event]]
tick = 10
kind = "end"
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("a minimal scenario loads with defaults") {
  const auto result = load_scenario_text(kMinimal);
  REQUIRE(result.ok());
  const auto& s = *result.scenario;
  CHECK(s.config.node_count == 1);
  CHECK(s.config.quorum == 1);
  CHECK(s.rollup_count == 1);
  CHECK(s.initial_stakes == std::vector<std::uint64_t>{0});  // min_stake defaults to 0
  CHECK(s.clock_skews == std::vector<Tick>{0});
  CHECK(s.sweep_interval == 1);
  CHECK(s.seed == 0);
  CHECK(s.end_tick == 10);
  CHECK(s.events.size() == 2);
}

TEST_CASE("non-majority quorum is refused at load time") {
  const auto text = replace(replace(std::string(kMinimal), "node_count = 1", "node_count = 2"),
                            "quorum = 1", "quorum = 1");
  const auto result = load_scenario_text(text);
  REQUIRE(!result.ok());
  CHECK(result.issue->kind == ScenarioIssue::Kind::Validation);
  CHECK(result.issue->message == "quorum > node_count / 2");
}

TEST_CASE("events out of tick order are refused") {
  std::string text(kMinimal);
  text = replace(text, "tick = 0", "tick = 11");
  const auto result = load_scenario_text(text);
  REQUIRE(!result.ok());
  CHECK(result.issue->kind == ScenarioIssue::Kind::Validation);
  CHECK(result.issue->message == "events sorted by tick");
}

TEST_CASE("the end event is mandatory and must be last") {
  std::string no_end(kMinimal);
  no_end = replace(no_end, "kind = \"end\"", "kind = \"publish\"\ntx = \"0:1\"");
  CHECK(!load_scenario_text(no_end).ok());
}

TEST_CASE("parse errors carry line and field") {
  const char* bad = R"(
[config]
node_count = )";
  const auto result = load_scenario_text(bad);
  REQUIRE(!result.ok());
  CHECK(result.issue->kind == ScenarioIssue::Kind::Parse);
  CHECK(result.issue->line == 3);
  CHECK(result.issue->field == "config.node_count");

  const auto unknown = load_scenario_text("[config]\nnot_a_key = 3\n");
  REQUIRE(!unknown.ok());
  CHECK(unknown.issue->field == "config.not_a_key");
  CHECK(unknown.issue->message == "unknown key");
}

TEST_CASE("duplicate publishes and self-dependencies are refused") {
  std::string dup(kMinimal);
  dup = replace(dup, "kind = \"end\"",
                "kind = \"publish\"\ntx = \"0:0\"\n\n[[event]]\ntick = 10\nkind = \"end\"");
  const auto r1 = load_scenario_text(dup);
  REQUIRE(!r1.ok());
  CHECK(r1.issue->message == "duplicate TxId: 0:0");

  std::string self(kMinimal);
  self = replace(self, "tx = \"0:0\"", "tx = \"0:0\"\ndeps = [\"0:0\"]");
  const auto r2 = load_scenario_text(self);
  REQUIRE(!r2.ok());
  CHECK(r2.issue->message == "self-dependency: 0:0");
}

TEST_CASE("slash fraction parses as an exact rational") {
  std::string text(kMinimal);
  text = replace(text, "deps_max = 1", "deps_max = 1\nslash_fraction = 0.25");
  const auto result = load_scenario_text(text);
  REQUIRE(result.ok());
  CHECK(result.scenario->config.slash_fraction == Rational{25, 100});

  std::string over(kMinimal);
  over = replace(over, "deps_max = 1", "deps_max = 1\nslash_fraction = 1.5");
  CHECK(!load_scenario_text(over).ok());
}

TEST_CASE("delay models validate their shape") {
  std::string uniform(kMinimal);
  uniform = replace(uniform, "[rollups]",
                    "[delay]\nmodel = \"uniform\"\nlo = 3\nhi = 1\n\n[rollups]");
  const auto r1 = load_scenario_text(uniform);
  REQUIRE(!r1.ok());
  CHECK(r1.issue->message == "0 <= lo <= hi");

  std::string table(kMinimal);
  table = replace(table, "[rollups]", "[delay]\nmodel = \"table\"\nrows = [[1, 2]]\n\n[rollups]");
  const auto r2 = load_scenario_text(table);
  REQUIRE(!r2.ok());
  CHECK(r2.issue->message == "one column per node");

  std::string good(kMinimal);
  good = replace(good, "[rollups]", "[delay]\nmodel = \"table\"\nrows = [[2]]\n\n[rollups]");
  const auto r3 = load_scenario_text(good);
  REQUIRE(r3.ok());
  CHECK(r3.scenario->delay.kind == DelayModel::Kind::Table);
  CHECK(r3.scenario->delay.table == std::vector<std::vector<Tick>>{{2}});
}

TEST_CASE("spurious watcher events need a target transaction") {
  std::string text(kMinimal);
  text = replace(text, "kind = \"end\"",
                 "kind = \"watcher\"\nwatcher = 0\naccused = 0\nspurious = true\n\n"
                 "[[event]]\ntick = 10\nkind = \"end\"");
  const auto result = load_scenario_text(text);
  REQUIRE(!result.ok());
  CHECK(result.issue->message == "spurious watcher events require a target tx");
}

TEST_CASE("every bundled preset loads") {
  for (const auto& preset : presets()) {
    const auto result = load_scenario_text(preset.text);
    INFO(preset.name, ": ", result.ok() ? "" : result.issue->str());
    CHECK(result.ok());
  }
  CHECK(find_preset("rogue-rollup") != nullptr);
  CHECK(find_preset("no-such-preset") == nullptr);
}
