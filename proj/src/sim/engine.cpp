// SPDX-License-Identifier: Apache-2.0
#include "sim/engine.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "enforcement/enforcement.hpp"
#include "proofs/proofs.hpp"
#include "scheduler/scheduler.hpp"
#include "sim/rng.hpp"

namespace dcp::sim {

namespace {

// Intra-tick processing phases. The queue orders by (tick, phase, tx, node,
// script index), which pins the total event order the trace contract needs.
enum Phase : int {
  kPhaseNodeFail = 0,
  kPhasePublish = 1,
  kPhaseDeliver = 2,
  kPhaseAssign = 3,
  kPhaseAdmit = 4,
  kPhaseExecClaim = 5,
  kPhaseWatcher = 6,
  kPhaseSweep = 7,
};

struct QueueItem {
  Tick tick = 0;
  int phase = 0;
  TxId tx{};
  std::uint32_t node = 0;
  std::uint32_t script = 0;  // scripted-event index for stable ties

  enum class Kind { Script, Deliver, Assign, Admit, Sweep } kind = Kind::Sweep;

  auto order_key() const { return std::tie(tick, phase, tx, node, script); }
  bool operator>(const QueueItem& other) const { return order_key() > other.order_key(); }
};

class Engine {
 public:
  explicit Engine(const Scenario& s)
      : scenario_(s),
        pool_(s.config, s.clock_skews),
        sched_(s.config, pool_),
        ledger_(s.rollup_count, s.config.min_stake, s.config.slash_fraction) {}

  RunOutput run();

 private:
  void emit(TraceEvent ev) { trace_.events.push_back(std::move(ev)); }

  Tick delay_for(const TxId& tx, std::uint32_t node) const {
    switch (scenario_.delay.kind) {
      case DelayModel::Kind::Fixed:
        return scenario_.delay.fixed;
      case DelayModel::Kind::Uniform:
        return uniform_delay(scenario_.seed, node, tx, scenario_.delay.lo, scenario_.delay.hi);
      case DelayModel::Kind::Table:
        return scenario_.delay.table[tx.rollup][node];
    }
    return 0;
  }

  void do_publish(const PublishEvent& ev);
  void do_deliver(const TxId& tx, std::uint32_t node, Tick now);
  void do_assign(const TxId& tx, Tick now);
  void do_admit(const TxId& tx, Tick now);
  void do_exec_claim(const ExecClaimEvent& ev);
  void do_watcher(const WatcherEvent& ev);
  void do_sweep(Tick now);
  void run_fast_path(Tick now);
  void record_commit(const TxId& tx, Tick now);
  void flush_notifications();
  void finalize_metrics();

  const Scenario& scenario_;
  Pool pool_;
  Scheduler sched_;
  StakeLedger ledger_;
  std::vector<ExecutionClaim> exec_claims_;
  std::set<Digest32> slashed_claims_;
  std::map<std::uint32_t, Tick> failed_from_;
  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<QueueItem>> queue_;
  Trace trace_;
  Metrics metrics_;
};

RunOutput Engine::run() {
  trace_.header = make_header(scenario_);

  for (std::uint32_t r = 0; r < scenario_.rollup_count; ++r) {
    const auto amount = scenario_.initial_stakes[r];
    if (amount == 0) continue;
    const auto& acct = ledger_.stake(RollupId{r}, amount);
    emit({.tick = 0, .kind = TraceKind::Staked, .rollup = r, .amount = amount,
          .total = acct.staked});
  }

  for (std::uint32_t i = 0; i < scenario_.events.size(); ++i) {
    const auto& ev = scenario_.events[i];
    QueueItem item;
    item.tick = event_tick(ev);
    item.script = i;
    item.kind = QueueItem::Kind::Script;
    if (const auto* pub = std::get_if<PublishEvent>(&ev)) {
      item.phase = kPhasePublish;
      item.tx = pub->tx;
    } else if (std::get_if<NodeFailEvent>(&ev)) {
      item.phase = kPhaseNodeFail;
    } else if (std::get_if<ExecClaimEvent>(&ev)) {
      item.phase = kPhaseExecClaim;
    } else if (std::get_if<WatcherEvent>(&ev)) {
      item.phase = kPhaseWatcher;
    } else {
      continue;  // End carries no work; end_tick already bounds the run
    }
    queue_.push(item);
  }
  if (scenario_.sweep_interval <= scenario_.end_tick) {
    queue_.push({.tick = scenario_.sweep_interval, .phase = kPhaseSweep,
                 .kind = QueueItem::Kind::Sweep});
  }

  Tick current = 0;
  while (!queue_.empty()) {
    const QueueItem item = queue_.top();
    queue_.pop();
    if (item.tick > scenario_.end_tick) continue;  // nothing runs past the end
    if (item.tick > current) {
      flush_notifications();
      current = item.tick;
    }
    switch (item.kind) {
      case QueueItem::Kind::Script: {
        const auto& ev = scenario_.events[item.script];
        if (const auto* pub = std::get_if<PublishEvent>(&ev)) {
          do_publish(*pub);
        } else if (const auto* fail = std::get_if<NodeFailEvent>(&ev)) {
          auto it = failed_from_.find(fail->node);
          if (it == failed_from_.end() || fail->tick < it->second) {
            failed_from_[fail->node] = fail->tick;
          }
        } else if (const auto* claim = std::get_if<ExecClaimEvent>(&ev)) {
          do_exec_claim(*claim);
        } else if (const auto* watch = std::get_if<WatcherEvent>(&ev)) {
          do_watcher(*watch);
        }
        break;
      }
      case QueueItem::Kind::Deliver:
        do_deliver(item.tx, item.node, item.tick);
        break;
      case QueueItem::Kind::Assign:
        do_assign(item.tx, item.tick);
        break;
      case QueueItem::Kind::Admit:
        do_admit(item.tx, item.tick);
        break;
      case QueueItem::Kind::Sweep:
        do_sweep(item.tick);
        if (item.tick + scenario_.sweep_interval <= scenario_.end_tick) {
          queue_.push({.tick = item.tick + scenario_.sweep_interval, .phase = kPhaseSweep,
                       .kind = QueueItem::Kind::Sweep});
        }
        break;
    }
  }
  flush_notifications();
  finalize_metrics();
  return {std::move(trace_), std::move(metrics_)};
}

void Engine::do_publish(const PublishEvent& ev) {
  Transaction tx;
  tx.id = ev.tx;
  tx.deps = ev.deps;
  tx.submit_time = ev.tick;
  tx.payload_digest = ev.payload.value_or(sha256("payload:" + to_string(ev.tx)));
  tx.auth = make_auth_token(ev.key_id.value_or(ev.tx.rollup), tx.id, tx.payload_digest);
  if (ev.forged) tx.auth.tag[0] ^= 0x01;

  const auto result = pool_.publish(
      std::move(tx), ev.tick, [&](std::uint32_t node) { return delay_for(ev.tx, node); },
      [&](RollupId r) { return ledger_.may_publish(r); });

  if (result.refused.has_value()) {
    const char* why = *result.refused == PublishRefusal::DuplicateTxId
                          ? "duplicate_txid"
                          : "insufficient_stake";
    emit({.tick = ev.tick, .kind = TraceKind::PublishRefused, .tx = ev.tx, .reason = why});
    ++metrics_.publish_refused;
    return;
  }
  emit({.tick = ev.tick, .kind = TraceKind::Published, .tx = ev.tx, .deps = ev.deps});
  ++metrics_.published;
  for (const auto& plan : result.deliveries) {
    queue_.push({.tick = plan.at, .phase = kPhaseDeliver, .tx = ev.tx, .node = plan.node,
                 .kind = QueueItem::Kind::Deliver});
  }
}

void Engine::do_deliver(const TxId& tx, std::uint32_t node, Tick now) {
  auto failed = failed_from_.find(node);
  if (failed != failed_from_.end() && now >= failed->second) return;  // dropped
  const Tick local = pool_.local_time(node, now);
  emit({.tick = now, .kind = TraceKind::Delivered, .tx = tx, .node = node, .time = local});
  if (pool_.record_receipt(tx, node, local).has_value()) {
    queue_.push({.tick = now, .phase = kPhaseAssign, .tx = tx, .kind = QueueItem::Kind::Assign});
  }
}

void Engine::do_assign(const TxId& tx, Tick now) {
  emit({.tick = now, .kind = TraceKind::TimestampAssigned, .tx = tx,
        .tau = *pool_.get_record(tx)->tau});
  queue_.push({.tick = now, .phase = kPhaseAdmit, .tx = tx, .kind = QueueItem::Kind::Admit});
}

void Engine::do_admit(const TxId& tx, Tick now) {
  const PoolRecord* rec = pool_.get_record(tx);
  if (rec->status != Status::Timestamped) return;  // already swept into a group commit

  if (!verify_auth(rec->tx)) {
    emit({.tick = now, .kind = TraceKind::Admitted, .tx = tx, .outcome = "rejected"});
    sched_.reject(tx, RejectReason::AuthFailed, now);
    emit({.tick = now, .kind = TraceKind::Rejected, .tx = tx,
          .reason = name(RejectReason::AuthFailed), .attempts = 0});
    return;
  }

  const AdmitResult result = sched_.admit(tx, now);
  switch (result.kind) {
    case AdmitResult::Kind::Committed:
      emit({.tick = now, .kind = TraceKind::Admitted, .tx = tx, .outcome = "committed"});
      for (const auto& member : result.group) {
        emit({.tick = now, .kind = TraceKind::Committed, .tx = member, .via = "admit",
              .root = tx});
        record_commit(member, now);
      }
      if (scenario_.config.fast_path) run_fast_path(now);
      break;
    case AdmitResult::Kind::Buffered:
      emit({.tick = now, .kind = TraceKind::Admitted, .tx = tx, .outcome = "buffered"});
      emit({.tick = now, .kind = TraceKind::Buffered, .tx = tx});
      break;
    case AdmitResult::Kind::Rejected:
      emit({.tick = now, .kind = TraceKind::Admitted, .tx = tx, .outcome = "rejected"});
      emit({.tick = now, .kind = TraceKind::Rejected, .tx = tx, .reason = name(*result.reason),
            .attempts = 0});
      break;
  }
}

void Engine::run_fast_path(Tick now) {
  for (const auto& action : sched_.fast_path_resolve(now)) {
    emit({.tick = now, .kind = TraceKind::Committed, .tx = action.txid, .via = "fast_path",
          .root = action.root});
    record_commit(action.txid, now);
  }
}

void Engine::do_exec_claim(const ExecClaimEvent& ev) {
  ExecutionClaim claim{ev.rollup, ev.tx, ev.tick,
                       execution_claim_digest(ev.rollup, ev.tx, ev.tick)};
  exec_claims_.push_back(claim);
  emit({.tick = ev.tick, .kind = TraceKind::ExecutionClaimed, .tx = ev.tx,
        .rollup = ev.rollup.value});
}

void Engine::do_watcher(const WatcherEvent& ev) {
  const Tick now = ev.tick;
  if (ev.spurious) {
    // A fabricated accusation: asserts ExecutedRejected no matter what the
    // pool records say. Adjudication recomputes the statement from actual
    // records, so this can only slash when the accusation happens to be true.
    const TxId target = *ev.tx;
    Digest32 exec_digest = sha256("dcp.fabricated:" + to_string(target));
    Tick claim_tick = now;
    for (const auto& claim : exec_claims_) {
      if (claim.claimant == ev.accused && claim.txid == target) {
        exec_digest = claim.digest;
        claim_tick = claim.at;
        break;
      }
    }
    MisbehaviorClaim claim;
    claim.accused = ev.accused;
    claim.txid = target;
    claim.claimed = ClaimKind::ExecutedRejected;
    claim.watcher = ev.watcher;
    claim.evidence = make_misbehavior_evidence(
        ClaimKind::ExecutedRejected, ev.accused, target,
        static_cast<std::uint64_t>(Status::Rejected), claim_tick, exec_digest);
    const auto outcome = ledger_.report(claim, pool_, exec_claims_, now);
    if (outcome.slash.has_value()) {
      emit({.tick = now, .kind = TraceKind::Slashed, .tx = target, .rollup = ev.accused.value,
            .amount = outcome.slash->amount, .remaining = outcome.slash->remaining,
            .watcher = ev.watcher});
    } else {
      emit({.tick = now, .kind = TraceKind::ClaimRejected, .tx = target,
            .rollup = ev.accused.value, .watcher = ev.watcher});
    }
    return;
  }

  // Honest watcher: examine the accused rollup's execution claims against
  // the pool and report every provable violation not already punished.
  for (const auto& exec : exec_claims_) {
    if (exec.claimant != ev.accused || exec.at > now) continue;
    if (ev.tx.has_value() && exec.txid != *ev.tx) continue;
    if (slashed_claims_.contains(exec.digest)) continue;

    const PoolRecord* rec = pool_.get_record(exec.txid);
    std::optional<ClaimKind> kind;
    if (rec != nullptr && rec->status == Status::Rejected) {
      kind = ClaimKind::ExecutedRejected;
    } else if (rec == nullptr || rec->status != Status::Committed) {
      kind = ClaimKind::ExecutedWithoutValidation;
    } else {
      for (const auto& dep : rec->tx.deps) {
        const PoolRecord* drec = pool_.get_record(dep);
        if (drec == nullptr || drec->status != Status::Committed) {
          kind = ClaimKind::SkippedDependency;
          break;
        }
      }
    }
    if (!kind.has_value()) continue;  // honestly executed

    MisbehaviorClaim claim;
    claim.accused = ev.accused;
    claim.txid = exec.txid;
    claim.claimed = *kind;
    claim.watcher = ev.watcher;
    claim.evidence = make_misbehavior_evidence(*kind, ev.accused, exec.txid, status_word(rec),
                                               exec.at, exec.digest);
    const auto outcome = ledger_.report(claim, pool_, exec_claims_, now);
    if (outcome.slash.has_value()) {
      slashed_claims_.insert(exec.digest);
      emit({.tick = now, .kind = TraceKind::Slashed, .tx = exec.txid,
            .rollup = ev.accused.value, .amount = outcome.slash->amount,
            .remaining = outcome.slash->remaining, .watcher = ev.watcher});
    } else {
      emit({.tick = now, .kind = TraceKind::ClaimRejected, .tx = exec.txid,
            .rollup = ev.accused.value, .watcher = ev.watcher});
    }
  }
}

void Engine::do_sweep(Tick now) {
  const SweepResult result = sched_.sweep(now);
  emit({.tick = now, .kind = TraceKind::SweepStart, .occupancy = result.occupancy_start});
  for (const auto& action : result.actions) {
    if (action.kind == SchedulerAction::Kind::Commit) {
      emit({.tick = now, .kind = TraceKind::Committed, .tx = action.txid, .via = "sweep",
            .root = action.root});
      record_commit(action.txid, now);
    } else {
      emit({.tick = now, .kind = TraceKind::Rejected, .tx = action.txid,
            .reason = name(*action.reason), .attempts = action.attempts});
    }
  }
  emit({.tick = now, .kind = TraceKind::SweepEnd, .occupancy = result.occupancy_end});
  metrics_.occupancy_sum += result.occupancy_end;
  metrics_.occupancy_samples += 1;
  metrics_.occupancy_max = std::max<std::uint64_t>(metrics_.occupancy_max, result.occupancy_end);
}

void Engine::record_commit(const TxId& tx, Tick now) {
  const Tick latency = now - *pool_.get_record(tx)->tau;
  metrics_.latency_sum += latency;
  if (metrics_.latency_count == 0 || latency > metrics_.latency_max) {
    metrics_.latency_max = latency;
  }
  ++metrics_.latency_count;
}

void Engine::flush_notifications() {
  auto notes = sched_.drain_notifications();
  std::sort(notes.begin(), notes.end(),
            [](const Notification& a, const Notification& b) { return a.txid < b.txid; });
  for (const auto& note : notes) {
    emit({.tick = note.issued_at, .kind = TraceKind::Notified, .tx = note.txid,
          .rollup = note.target.value, .reason = name(note.reason)});
  }
}

void Engine::finalize_metrics() {
  for (const auto& [id, rec] : pool_.records()) {
    switch (rec.status) {
      case Status::Committed:
        ++metrics_.committed;
        break;
      case Status::Rejected:
        ++metrics_.rejected[static_cast<std::size_t>(*rec.reject_reason)];
        ++metrics_.rejected_total;
        break;
      default:
        ++metrics_.unsettled;
        break;
    }
  }
  metrics_.initial_stakes = scenario_.initial_stakes;
  for (const auto& acct : ledger_.accounts()) {
    metrics_.stake_remaining.push_back(acct.staked);
    metrics_.slash_total.push_back(acct.slashed_total);
  }
}

}  // namespace

RunOutput run(const Scenario& scenario) {
  if (auto issue = validate_scenario(scenario)) {
    throw Error(Errc::InvalidArgument, "invalid scenario: " + issue->str());
  }
  Engine engine(scenario);
  return engine.run();
}

}  // namespace dcp::sim
