// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "pool/pool.hpp"

namespace dcp {

struct BufferEntry {
  TxId txid;
  Tick entered_at = 0;
  std::uint32_t attempts = 0;  // failed resolution passes; never exceeds deps_max
};

struct Notification {
  RollupId target;
  TxId txid;
  RejectReason reason = RejectReason::TimedOut;
  Tick issued_at = 0;
};

struct AdmitResult {
  enum class Kind { Committed, Buffered, Rejected };
  Kind kind = Kind::Buffered;
  std::vector<TxId> group;  // newly committed members, TxId order
  std::optional<RejectReason> reason;
};

/// One commit or rejection produced while processing the buffer, in the
/// order it happened.
struct SchedulerAction {
  enum class Kind { Commit, Reject };
  Kind kind = Kind::Commit;
  TxId txid;
  TxId root;                            // commit only: entry whose closure resolved
  std::optional<RejectReason> reason;   // reject only
  std::uint32_t attempts = 0;           // reject only: attempts at rejection
};

struct SweepResult {
  std::vector<SchedulerAction> actions;
  std::size_t occupancy_start = 0;
  std::size_t occupancy_end = 0;
};

/// Pairwise timestamp compatibility: |a - b| <= delta.
bool compatible(Tick tau_a, Tick tau_b, Tick delta);

/// Admission, buffering, periodic dependency resolution and the rejection
/// policy. All timestamps come from the pool; the scheduler owns only buffer
/// residency and the committed set.
class Scheduler {
 public:
  Scheduler(const ProtocolConfig& cfg, Pool& pool);

  /// Admission of a freshly timestamped transaction. Commits its whole
  /// dependency closure when every member is timestamped and the closure is
  /// pairwise compatible; buffers it otherwise. Observing an already
  /// rejected member rejects immediately.
  AdmitResult admit(const TxId& txid, Tick now);

  /// One periodic pass: timeouts, re-resolution with attempt accounting,
  /// same-sweep rejection of dependents, then capacity eviction
  /// (oldest tau first) until the buffer fits.
  SweepResult sweep(Tick now);

  /// Proof-carrying early resolution of buffered entries; only runs work the
  /// next sweep would also commit (expired entries are left to the timeout
  /// rule), so it changes commit ticks, never outcomes. No attempt counting.
  std::vector<SchedulerAction> fast_path_resolve(Tick now);

  /// Terminal rejection plus its notification. Throws AlreadyTerminal.
  Notification reject(const TxId& txid, RejectReason reason, Tick now);

  /// Rejection notifications accumulated since the last drain, in issue order.
  std::vector<Notification> drain_notifications();

  const std::set<TxId>& committed() const { return committed_; }
  std::size_t buffer_size() const { return buffer_.size(); }
  const BufferEntry* buffered(const TxId& txid) const;
  std::vector<TxId> buffer_order() const;  // by (tau, TxId)

 private:
  struct BufferKey {
    Tick tau;
    TxId txid;
    auto operator<=>(const BufferKey&) const = default;
  };

  enum class Resolution { Resolvable, Unresolved, DeadDependency };
  struct ClosureCheck {
    Resolution resolution;
    std::vector<TxId> members;
  };

  ClosureCheck check_closure(const TxId& root) const;
  std::vector<TxId> commit_group(const std::vector<TxId>& members);
  void buffer_insert(const TxId& txid, Tick now);
  void buffer_erase(const TxId& txid);
  Tick tau_of(const TxId& txid) const;

  const ProtocolConfig& cfg_;
  Pool& pool_;
  std::map<BufferKey, BufferEntry> buffer_;
  std::map<TxId, BufferKey> buffer_index_;
  std::set<TxId> committed_;
  std::vector<Notification> pending_notifications_;
};

}  // namespace dcp
