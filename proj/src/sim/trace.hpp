// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "core/types.hpp"
#include "sim/scenario.hpp"

namespace dcp::sim {

inline constexpr int kTraceFormatVersion = 1;

enum class TraceKind : std::uint8_t {
  Staked,
  Published,
  PublishRefused,
  Delivered,
  TimestampAssigned,
  Admitted,
  Buffered,
  Committed,
  Rejected,
  ExecutionClaimed,
  Slashed,
  ClaimRejected,
  SweepStart,
  SweepEnd,
  Notified,
};

const char* name(TraceKind k);

/// One structured trace record. Which fields are meaningful depends on the
/// kind; serialization writes exactly the populated set for that kind (see
/// docs/trace_format.md).
struct TraceEvent {
  Tick tick = 0;
  TraceKind kind = TraceKind::Published;
  TxId tx{};
  std::vector<TxId> deps;      // published
  std::uint32_t rollup = 0;    // staked / slashed / claim_rejected / notified
  std::uint32_t node = 0;      // delivered
  Tick time = 0;               // delivered (local receipt time)
  Tick tau = 0;                // timestamp_assigned
  std::string outcome;         // admitted
  std::string reason;          // rejected / notified / publish_refused
  std::uint32_t attempts = 0;  // rejected
  std::string via;             // committed: admit | sweep | fast_path
  TxId root{};                 // committed
  std::uint64_t amount = 0;    // staked / slashed
  std::uint64_t total = 0;     // staked: balance after
  std::uint64_t remaining = 0; // slashed: balance after
  std::uint64_t watcher = 0;   // slashed / claim_rejected
  std::uint64_t occupancy = 0; // sweep_start / sweep_end
};

/// Run parameters embedded as the first trace line so the offline auditor
/// needs nothing but the trace file.
struct RunHeader {
  int format = kTraceFormatVersion;
  std::uint64_t seed = 0;
  std::uint32_t node_count = 1;
  std::uint32_t quorum = 1;
  Tick delta = 0;
  Tick tau_max = 1;
  std::uint32_t buffer_max = 1;
  std::uint32_t deps_max = 1;
  std::uint64_t min_stake = 0;
  Rational slash_fraction{1, 1};
  bool fast_path = false;
  Tick sweep_interval = 1;
  std::uint32_t rollup_count = 1;
  std::vector<std::uint64_t> initial_stakes;
  Tick end_tick = 0;
};

RunHeader make_header(const Scenario& s);

struct Trace {
  RunHeader header;
  std::vector<TraceEvent> events;

  /// Newline-delimited records, key order fixed; byte-identical for
  /// identical (scenario, seed) runs.
  std::string serialize() const;
};

/// Aggregates reported at the end of a run. Accumulators stay integral so
/// an independent trace fold can reproduce them exactly.
struct Metrics {
  std::uint64_t published = 0;
  std::uint64_t publish_refused = 0;
  std::uint64_t committed = 0;
  std::array<std::uint64_t, kRejectReasonCount> rejected{};
  std::uint64_t rejected_total = 0;
  std::uint64_t unsettled = 0;
  std::uint64_t occupancy_sum = 0;
  std::uint64_t occupancy_samples = 0;
  std::uint64_t occupancy_max = 0;
  std::int64_t latency_sum = 0;
  std::uint64_t latency_count = 0;
  std::int64_t latency_max = 0;
  std::vector<std::uint64_t> initial_stakes;
  std::vector<std::uint64_t> stake_remaining;
  std::vector<std::uint64_t> slash_total;

  bool operator==(const Metrics&) const = default;
  double occupancy_mean() const {
    return occupancy_samples == 0
               ? 0.0
               : static_cast<double>(occupancy_sum) / static_cast<double>(occupancy_samples);
  }
  double latency_mean() const {
    return latency_count == 0
               ? 0.0
               : static_cast<double>(latency_sum) / static_cast<double>(latency_count);
  }
  std::string to_json() const;
};

}  // namespace dcp::sim
