// SPDX-License-Identifier: Apache-2.0
#include "sim/trace.hpp"

#include <sstream>

namespace dcp::sim {

namespace {

void append_txids(std::ostringstream& out, const std::vector<TxId>& ids) {
  out << '[';
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i != 0) out << ',';
    out << '"' << to_string(ids[i]) << '"';
  }
  out << ']';
}

}  // namespace

const char* name(TraceKind k) {
  switch (k) {
    case TraceKind::Staked: return "staked";
    case TraceKind::Published: return "published";
    case TraceKind::PublishRefused: return "publish_refused";
    case TraceKind::Delivered: return "delivered";
    case TraceKind::TimestampAssigned: return "timestamp_assigned";
    case TraceKind::Admitted: return "admitted";
    case TraceKind::Buffered: return "buffered";
    case TraceKind::Committed: return "committed";
    case TraceKind::Rejected: return "rejected";
    case TraceKind::ExecutionClaimed: return "execution_claimed";
    case TraceKind::Slashed: return "slashed";
    case TraceKind::ClaimRejected: return "claim_rejected";
    case TraceKind::SweepStart: return "sweep_start";
    case TraceKind::SweepEnd: return "sweep_end";
    case TraceKind::Notified: return "notified";
  }
  return "unknown";
}

RunHeader make_header(const Scenario& s) {
  RunHeader h;
  h.seed = s.seed;
  h.node_count = s.config.node_count;
  h.quorum = s.config.quorum;
  h.delta = s.config.delta;
  h.tau_max = s.config.tau_max;
  h.buffer_max = s.config.buffer_max;
  h.deps_max = s.config.deps_max;
  h.min_stake = s.config.min_stake;
  h.slash_fraction = s.config.slash_fraction;
  h.fast_path = s.config.fast_path;
  h.sweep_interval = s.sweep_interval;
  h.rollup_count = s.rollup_count;
  h.initial_stakes = s.initial_stakes;
  h.end_tick = s.end_tick;
  return h;
}

std::string Trace::serialize() const {
  std::ostringstream out;
  out << "{\"kind\":\"run_header\",\"format\":" << header.format
      << ",\"seed\":" << header.seed
      << ",\"node_count\":" << header.node_count
      << ",\"quorum\":" << header.quorum
      << ",\"delta\":" << header.delta
      << ",\"tau_max\":" << header.tau_max
      << ",\"buffer_max\":" << header.buffer_max
      << ",\"deps_max\":" << header.deps_max
      << ",\"min_stake\":" << header.min_stake
      << ",\"slash_num\":" << header.slash_fraction.num
      << ",\"slash_den\":" << header.slash_fraction.den
      << ",\"fast_path\":" << (header.fast_path ? "true" : "false")
      << ",\"sweep_interval\":" << header.sweep_interval
      << ",\"rollup_count\":" << header.rollup_count
      << ",\"initial_stakes\":[";
  for (std::size_t i = 0; i < header.initial_stakes.size(); ++i) {
    if (i != 0) out << ',';
    out << header.initial_stakes[i];
  }
  out << "],\"end_tick\":" << header.end_tick << "}\n";

  for (const auto& ev : events) {
    out << "{\"tick\":" << ev.tick << ",\"kind\":\"" << name(ev.kind) << '"';
    switch (ev.kind) {
      case TraceKind::Staked:
        out << ",\"rollup\":" << ev.rollup << ",\"amount\":" << ev.amount
            << ",\"total\":" << ev.total;
        break;
      case TraceKind::Published:
        out << ",\"tx\":\"" << to_string(ev.tx) << "\",\"deps\":";
        append_txids(out, ev.deps);
        break;
      case TraceKind::PublishRefused:
        out << ",\"tx\":\"" << to_string(ev.tx) << "\",\"reason\":\"" << ev.reason << '"';
        break;
      case TraceKind::Delivered:
        out << ",\"tx\":\"" << to_string(ev.tx) << "\",\"node\":" << ev.node
            << ",\"time\":" << ev.time;
        break;
      case TraceKind::TimestampAssigned:
        out << ",\"tx\":\"" << to_string(ev.tx) << "\",\"tau\":" << ev.tau;
        break;
      case TraceKind::Admitted:
        out << ",\"tx\":\"" << to_string(ev.tx) << "\",\"outcome\":\"" << ev.outcome << '"';
        break;
      case TraceKind::Buffered:
        out << ",\"tx\":\"" << to_string(ev.tx) << '"';
        break;
      case TraceKind::Committed:
        out << ",\"tx\":\"" << to_string(ev.tx) << "\",\"root\":\"" << to_string(ev.root)
            << "\",\"via\":\"" << ev.via << '"';
        break;
      case TraceKind::Rejected:
        out << ",\"tx\":\"" << to_string(ev.tx) << "\",\"reason\":\"" << ev.reason
            << "\",\"attempts\":" << ev.attempts;
        break;
      case TraceKind::ExecutionClaimed:
        out << ",\"rollup\":" << ev.rollup << ",\"tx\":\"" << to_string(ev.tx) << '"';
        break;
      case TraceKind::Slashed:
        out << ",\"rollup\":" << ev.rollup << ",\"amount\":" << ev.amount
            << ",\"remaining\":" << ev.remaining << ",\"watcher\":" << ev.watcher
            << ",\"tx\":\"" << to_string(ev.tx) << '"';
        break;
      case TraceKind::ClaimRejected:
        out << ",\"rollup\":" << ev.rollup << ",\"tx\":\"" << to_string(ev.tx)
            << "\",\"watcher\":" << ev.watcher;
        break;
      case TraceKind::SweepStart:
      case TraceKind::SweepEnd:
        out << ",\"occupancy\":" << ev.occupancy;
        break;
      case TraceKind::Notified:
        out << ",\"tx\":\"" << to_string(ev.tx) << "\",\"rollup\":" << ev.rollup
            << ",\"reason\":\"" << ev.reason << '"';
        break;
    }
    out << "}\n";
  }
  return out.str();
}

std::string Metrics::to_json() const {
  std::ostringstream out;
  out << "{\n";
  out << "  \"published\": " << published << ",\n";
  out << "  \"publish_refused\": " << publish_refused << ",\n";
  out << "  \"committed\": " << committed << ",\n";
  out << "  \"rejected\": {";
  for (std::size_t i = 0; i < rejected.size(); ++i) {
    if (i != 0) out << ", ";
    out << '"' << name(static_cast<RejectReason>(i)) << "\": " << rejected[i];
  }
  out << ", \"total\": " << rejected_total << "},\n";
  out << "  \"unsettled\": " << unsettled << ",\n";
  out << "  \"buffer_occupancy\": {\"mean\": " << occupancy_mean()
      << ", \"max\": " << occupancy_max << ", \"samples\": " << occupancy_samples << "},\n";
  out << "  \"commit_latency\": {\"mean\": " << latency_mean()
      << ", \"max\": " << (latency_count == 0 ? 0 : latency_max)
      << ", \"count\": " << latency_count << "},\n";
  out << "  \"stakes\": [";
  for (std::size_t r = 0; r < stake_remaining.size(); ++r) {
    if (r != 0) out << ", ";
    out << "{\"rollup\": " << r << ", \"initial\": " << initial_stakes[r]
        << ", \"staked\": " << stake_remaining[r]
        << ", \"slashed_total\": " << slash_total[r] << "}";
  }
  out << "]\n}\n";
  return out.str();
}

}  // namespace dcp::sim
