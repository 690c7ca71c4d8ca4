// SPDX-License-Identifier: Apache-2.0
#include "scheduler/scheduler.hpp"

#include <algorithm>
#include <cstdlib>

#include "core/closure.hpp"
#include "proofs/proofs.hpp"

namespace dcp {

bool compatible(Tick tau_a, Tick tau_b, Tick delta) {
  const Tick diff = tau_a >= tau_b ? tau_a - tau_b : tau_b - tau_a;
  return diff <= delta;
}

Scheduler::Scheduler(const ProtocolConfig& cfg, Pool& pool) : cfg_(cfg), pool_(pool) {}

Scheduler::ClosureCheck Scheduler::check_closure(const TxId& root) const {
  ClosureCheck out{Resolution::Unresolved, {}};
  ClosureResult closure = dependency_closure(root, pool_.deps_lookup());

  for (const auto& id : closure.members) {
    const PoolRecord* rec = pool_.get_record(id);
    if (rec->status == Status::Rejected) {
      out.resolution = Resolution::DeadDependency;
      return out;
    }
  }
  if (!closure.missing.empty()) return out;

  std::vector<Tick> taus;
  taus.reserve(closure.members.size());
  for (const auto& id : closure.members) {
    const PoolRecord* rec = pool_.get_record(id);
    if (!rec->tau.has_value()) return out;  // a member is still Pending
    // A timestamped member that has not been admitted yet may still fail
    // authenticity; committing it as part of a group would bypass that
    // check. Hold the group until the member's own admission settles it.
    if (rec->status == Status::Timestamped && !verify_auth(rec->tx)) return out;
    taus.push_back(*rec->tau);
  }
  // Committed members anchor the group with their recorded tau; pairwise
  // compatibility over the closure reduces to the extremes.
  const auto [lo, hi] = std::minmax_element(taus.begin(), taus.end());
  if (!compatible(*lo, *hi, cfg_.delta)) return out;

  out.resolution = Resolution::Resolvable;
  out.members = std::move(closure.members);
  return out;
}

std::vector<TxId> Scheduler::commit_group(const std::vector<TxId>& members) {
  std::vector<TxId> newly;
  for (const auto& id : members) {
    const PoolRecord* rec = pool_.get_record(id);
    if (rec->status == Status::Committed) continue;
    pool_.set_status(id, Status::Committed);
    buffer_erase(id);
    committed_.insert(id);
    newly.push_back(id);
  }
  return newly;
}

void Scheduler::buffer_insert(const TxId& txid, Tick now) {
  const BufferKey key{tau_of(txid), txid};
  buffer_.emplace(key, BufferEntry{txid, now, 0});
  buffer_index_.emplace(txid, key);
}

void Scheduler::buffer_erase(const TxId& txid) {
  auto it = buffer_index_.find(txid);
  if (it == buffer_index_.end()) return;
  buffer_.erase(it->second);
  buffer_index_.erase(it);
}

Tick Scheduler::tau_of(const TxId& txid) const {
  const PoolRecord* rec = pool_.get_record(txid);
  if (rec == nullptr || !rec->tau.has_value()) {
    throw Error(Errc::Internal, "tau missing for " + to_string(txid));
  }
  return *rec->tau;
}

AdmitResult Scheduler::admit(const TxId& txid, Tick now) {
  const PoolRecord* rec = pool_.get_record(txid);
  if (rec == nullptr) throw Error(Errc::UnknownTx, "admit of unknown tx");
  if (rec->status != Status::Timestamped) {
    throw Error(Errc::InvalidArgument, "admit requires a Timestamped record");
  }

  ClosureCheck check = check_closure(txid);
  AdmitResult out;
  switch (check.resolution) {
    case Resolution::Resolvable:
      out.kind = AdmitResult::Kind::Committed;
      out.group = commit_group(check.members);
      return out;
    case Resolution::DeadDependency:
      reject(txid, RejectReason::DependencyRejected, now);
      out.kind = AdmitResult::Kind::Rejected;
      out.reason = RejectReason::DependencyRejected;
      return out;
    case Resolution::Unresolved:
      pool_.set_status(txid, Status::Buffered);
      buffer_insert(txid, now);
      out.kind = AdmitResult::Kind::Buffered;
      return out;
  }
  std::abort();  // unreachable
}

SweepResult Scheduler::sweep(Tick now) {
  SweepResult result;
  result.occupancy_start = buffer_.size();

  // Step 1: age out entries whose canonical timestamp is too old.
  std::vector<TxId> order = buffer_order();
  for (const auto& id : order) {
    if (now - tau_of(id) > cfg_.tau_max) {
      const auto attempts = buffer_index_.count(id) ? buffer_.at(buffer_index_.at(id)).attempts : 0;
      reject(id, RejectReason::TimedOut, now);
      result.actions.push_back({SchedulerAction::Kind::Reject, id, {},
                                RejectReason::TimedOut, attempts});
    }
  }

  // Step 2: one resolution pass in (tau, TxId) order. Failure costs one
  // attempt; the pass that would push attempts past deps_max rejects instead,
  // but only after resolution has had its chance.
  order = buffer_order();
  for (const auto& id : order) {
    auto idx = buffer_index_.find(id);
    if (idx == buffer_index_.end()) continue;  // committed earlier in this pass
    ClosureCheck check = check_closure(id);
    if (check.resolution == Resolution::Resolvable) {
      for (const auto& member : commit_group(check.members)) {
        result.actions.push_back({SchedulerAction::Kind::Commit, member, id, {}, 0});
      }
      continue;
    }
    if (check.resolution == Resolution::DeadDependency) {
      const auto attempts = buffer_.at(idx->second).attempts;
      reject(id, RejectReason::DependencyRejected, now);
      result.actions.push_back({SchedulerAction::Kind::Reject, id, {},
                                RejectReason::DependencyRejected, attempts});
      continue;
    }
    BufferEntry& entry = buffer_.at(idx->second);
    if (entry.attempts == cfg_.deps_max) {
      reject(id, RejectReason::AttemptsExhausted, now);
      result.actions.push_back({SchedulerAction::Kind::Reject, id, {},
                                RejectReason::AttemptsExhausted, cfg_.deps_max});
    } else {
      ++entry.attempts;
    }
  }

  // Step 3: entries examined before a co-member's rejection still leave in
  // the same sweep.
  order = buffer_order();
  for (const auto& id : order) {
    if (!buffer_index_.contains(id)) continue;
    if (check_closure(id).resolution == Resolution::DeadDependency) {
      const auto attempts = buffer_.at(buffer_index_.at(id)).attempts;
      reject(id, RejectReason::DependencyRejected, now);
      result.actions.push_back({SchedulerAction::Kind::Reject, id, {},
                                RejectReason::DependencyRejected, attempts});
    }
  }

  // Step 4: rejection policy under capacity pressure, oldest tau first.
  while (buffer_.size() > cfg_.buffer_max) {
    const auto front = buffer_.begin()->second;
    reject(front.txid, RejectReason::BufferEvicted, now);
    result.actions.push_back({SchedulerAction::Kind::Reject, front.txid, {},
                              RejectReason::BufferEvicted, front.attempts});
  }

  result.occupancy_end = buffer_.size();
  return result;
}

std::vector<SchedulerAction> Scheduler::fast_path_resolve(Tick now) {
  std::vector<SchedulerAction> actions;
  for (const auto& id : buffer_order()) {
    auto idx = buffer_index_.find(id);
    if (idx == buffer_index_.end()) continue;
    if (now - tau_of(id) > cfg_.tau_max) continue;  // expired; owned by the sweep
    ClosureCheck check = check_closure(id);
    if (check.resolution != Resolution::Resolvable) continue;
    const ProofArtifact proof = make_dependency_proof(check.members, pool_);
    const auto statement = dependency_statement_for(check.members, pool_);
    if (!verify_proof(proof, statement)) {
      throw Error(Errc::Internal, "fast-path proof failed to verify");
    }
    for (const auto& member : commit_group(check.members)) {
      actions.push_back({SchedulerAction::Kind::Commit, member, id, {}, 0});
    }
  }
  return actions;
}

Notification Scheduler::reject(const TxId& txid, RejectReason reason, Tick now) {
  const PoolRecord* rec = pool_.get_record(txid);
  if (rec == nullptr) throw Error(Errc::UnknownTx, "reject of unknown tx");
  if (is_terminal(rec->status)) {
    throw Error(Errc::AlreadyTerminal,
                to_string(txid) + " is terminal (" + name(rec->status) + ")");
  }
  pool_.set_status(txid, Status::Rejected, reason);
  buffer_erase(txid);
  Notification note{RollupId{txid.rollup}, txid, reason, now};
  pending_notifications_.push_back(note);
  return note;
}

std::vector<Notification> Scheduler::drain_notifications() {
  std::vector<Notification> out;
  out.swap(pending_notifications_);
  return out;
}

const BufferEntry* Scheduler::buffered(const TxId& txid) const {
  auto it = buffer_index_.find(txid);
  return it == buffer_index_.end() ? nullptr : &buffer_.at(it->second);
}

std::vector<TxId> Scheduler::buffer_order() const {
  std::vector<TxId> out;
  out.reserve(buffer_.size());
  for (const auto& [key, entry] : buffer_) out.push_back(entry.txid);
  return out;
}

}  // namespace dcp
