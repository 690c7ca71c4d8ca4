// SPDX-License-Identifier: Apache-2.0
//
// Independent recomputation of run metrics by folding the raw trace.
#pragma once

#include <map>

#include "sim/trace.hpp"

namespace oracle {

inline dcp::sim::Metrics fold_metrics(const dcp::sim::Trace& trace) {
  using namespace dcp;
  using namespace dcp::sim;
  Metrics m;
  std::map<TxId, Tick> tau;
  std::vector<std::uint64_t> staked(trace.header.rollup_count, 0);
  std::vector<std::uint64_t> slashed(trace.header.rollup_count, 0);

  for (const auto& ev : trace.events) {
    switch (ev.kind) {
      case TraceKind::Published:
        ++m.published;
        break;
      case TraceKind::PublishRefused:
        ++m.publish_refused;
        break;
      case TraceKind::TimestampAssigned:
        tau[ev.tx] = ev.tau;
        break;
      case TraceKind::Committed: {
        ++m.committed;
        const Tick latency = ev.tick - tau.at(ev.tx);
        m.latency_sum += latency;
        if (m.latency_count == 0 || latency > m.latency_max) m.latency_max = latency;
        ++m.latency_count;
        break;
      }
      case TraceKind::Rejected: {
        const auto reason = reject_reason_from_name(ev.reason);
        ++m.rejected[static_cast<std::size_t>(*reason)];
        ++m.rejected_total;
        break;
      }
      case TraceKind::SweepEnd:
        m.occupancy_sum += ev.occupancy;
        m.occupancy_samples += 1;
        if (ev.occupancy > m.occupancy_max) m.occupancy_max = ev.occupancy;
        break;
      case TraceKind::Staked:
        staked[ev.rollup] += ev.amount;
        break;
      case TraceKind::Slashed:
        staked[ev.rollup] -= ev.amount;
        slashed[ev.rollup] += ev.amount;
        break;
      default:
        break;
    }
  }
  m.unsettled = m.published - m.committed - m.rejected_total;
  m.initial_stakes = trace.header.initial_stakes;
  m.stake_remaining = staked;
  m.slash_total = slashed;
  return m;
}

}  // namespace oracle
