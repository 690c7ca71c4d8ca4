// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "core/closure.hpp"
#include "core/types.hpp"

namespace dcp {

/// A transaction's life inside the decentralized common pool.
struct PoolRecord {
  Transaction tx;
  std::map<std::uint32_t, Tick> receipts;  // node index -> local receipt tick
  std::optional<Tick> tau;                 // canonical timestamp, set once
  Status status = Status::Pending;
  std::optional<RejectReason> reject_reason;
};

struct DeliveryPlan {
  std::uint32_t node = 0;
  Tick at = 0;  // global tick at which the node receives the transaction
};

enum class PublishRefusal {
  DuplicateTxId,
  InsufficientStake,
};

struct PublishResult {
  std::optional<PublishRefusal> refused;
  std::vector<DeliveryPlan> deliveries;  // one per node; empty when refused
};

/// The pool abstracts its node set to receipt bookkeeping: a record becomes
/// Timestamped the moment a quorum of distinct nodes has receipted it, and
/// tau is frozen to the q-th smallest receipt time at that moment.
class Pool {
 public:
  /// clock_skews: per-node offsets added by the caller when computing local
  /// receipt times; kept here only so snapshots can expose them.
  Pool(ProtocolConfig cfg, std::vector<Tick> clock_skews);

  /// Schedules one delivery per node at now + delay_fn(node). The stake gate
  /// refuses publication for under-collateralized rollups.
  PublishResult publish(Transaction tx, Tick now,
                        const std::function<Tick(std::uint32_t)>& delay_fn,
                        const std::function<bool(RollupId)>& stake_gate);

  /// Records one node's receipt. Returns tau when this receipt completes the
  /// quorum, nothing otherwise. Throws UnknownTx / DuplicateReceipt.
  std::optional<Tick> record_receipt(const TxId& txid, std::uint32_t node, Tick local_time);

  const PoolRecord* get_record(const TxId& txid) const;

  /// Status transition with legality enforcement; reason accompanies
  /// Rejected only.
  void set_status(const TxId& txid, Status next,
                  std::optional<RejectReason> reason = std::nullopt);

  const std::map<TxId, PoolRecord>& records() const { return records_; }
  const ProtocolConfig& config() const { return cfg_; }
  Tick local_time(std::uint32_t node, Tick global) const;

  /// Dependency lookup over every known record, regardless of status.
  DepsLookup deps_lookup() const;

 private:
  ProtocolConfig cfg_;
  std::vector<Tick> clock_skews_;
  std::map<TxId, PoolRecord> records_;
};

}  // namespace dcp
