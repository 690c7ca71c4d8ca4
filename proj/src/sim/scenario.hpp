// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "core/types.hpp"

namespace dcp::sim {

struct DelayModel {
  enum class Kind { Fixed, Uniform, Table };
  Kind kind = Kind::Fixed;
  Tick fixed = 0;
  Tick lo = 0;
  Tick hi = 0;
  std::vector<std::vector<Tick>> table;  // [rollup][node]
};

struct PublishEvent {
  Tick tick = 0;
  TxId tx;
  std::vector<TxId> deps;
  bool forged = false;
  std::optional<std::uint64_t> key_id;
  std::optional<Digest32> payload;
};

struct NodeFailEvent {
  Tick tick = 0;
  std::uint32_t node = 0;
};

struct ExecClaimEvent {
  Tick tick = 0;
  RollupId rollup;
  TxId tx;
};

struct WatcherEvent {
  Tick tick = 0;
  std::uint64_t watcher = 0;
  RollupId accused;
  std::optional<TxId> tx;
  bool spurious = false;
};

struct EndEvent {
  Tick tick = 0;
};

using ScenarioEvent =
    std::variant<PublishEvent, NodeFailEvent, ExecClaimEvent, WatcherEvent, EndEvent>;

Tick event_tick(const ScenarioEvent& ev);

struct Scenario {
  ProtocolConfig config;
  std::uint32_t rollup_count = 1;
  std::vector<std::uint64_t> initial_stakes;  // one per rollup
  std::vector<Tick> clock_skews;              // one per node
  DelayModel delay;
  Tick sweep_interval = 1;
  std::uint64_t seed = 0;
  std::vector<ScenarioEvent> events;  // tick-sorted; exactly one End, last
  Tick end_tick = 0;
};

struct ScenarioIssue {
  enum class Kind { Parse, Validation };
  Kind kind = Kind::Parse;
  std::size_t line = 0;      // 0 when not line-anchored
  std::string field;
  std::string message;
  std::string str() const;
};

struct LoadResult {
  std::optional<Scenario> scenario;
  std::optional<ScenarioIssue> issue;
  bool ok() const { return scenario.has_value(); }
};

/// Parses and validates the keyed-table scenario text (see
/// docs/scenario_format.md). All ProtocolConfig invariants are enforced
/// here; a Scenario that loads is safe to run.
LoadResult load_scenario_text(std::string_view text);
LoadResult load_scenario_file(const std::string& path);

/// Validation of an in-memory scenario (load_scenario_text applies this).
std::optional<ScenarioIssue> validate_scenario(const Scenario& s);

}  // namespace dcp::sim
