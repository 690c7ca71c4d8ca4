// SPDX-License-Identifier: Apache-2.0
#include "enforcement/enforcement.hpp"

#include "core/closure.hpp"

namespace dcp {

Digest32 execution_claim_digest(RollupId claimant, const TxId& txid, Tick at) {
  ByteWriter w;
  w.text("dcp.exec");
  w.u32be(claimant.value);
  w.u32be(txid.rollup);
  w.u64be(txid.seq);
  w.tick(at);
  return sha256(w.view());
}

ProofArtifact make_misbehavior_evidence(ClaimKind claim, RollupId accused, const TxId& txid,
                                        std::uint64_t status_word, Tick claim_tick,
                                        const Digest32& exec_digest) {
  const auto statement =
      misbehavior_statement(claim, accused, txid, status_word, claim_tick, exec_digest);
  return make_proof(ProofKind::Misbehavior, statement);
}

StakeLedger::StakeLedger(std::uint32_t rollup_count, std::uint64_t min_stake,
                         Rational slash_fraction)
    : min_stake_(min_stake), slash_fraction_(slash_fraction) {
  accounts_.reserve(rollup_count);
  for (std::uint32_t r = 0; r < rollup_count; ++r) {
    accounts_.push_back(StakeAccount{RollupId{r}, 0, 0});
  }
}

const StakeAccount& StakeLedger::stake(RollupId rollup, std::uint64_t amount) {
  if (amount == 0) throw Error(Errc::InvalidArgument, "stake amount must be positive");
  StakeAccount& acct = account_mut(rollup);
  acct.staked += amount;
  return acct;
}

bool StakeLedger::may_publish(RollupId rollup) const {
  return account(rollup).staked >= min_stake_;
}

const StakeAccount& StakeLedger::account(RollupId rollup) const {
  if (rollup.value >= accounts_.size()) {
    throw Error(Errc::InvalidArgument, "unknown rollup " + std::to_string(rollup.value));
  }
  return accounts_[rollup.value];
}

StakeAccount& StakeLedger::account_mut(RollupId rollup) {
  if (rollup.value >= accounts_.size()) {
    throw Error(Errc::InvalidArgument, "unknown rollup " + std::to_string(rollup.value));
  }
  return accounts_[rollup.value];
}

ReportOutcome StakeLedger::report(const MisbehaviorClaim& claim, const Pool& pool,
                                  const std::vector<ExecutionClaim>& execution_claims,
                                  Tick now) {
  if (claim.evidence.kind != ProofKind::Misbehavior) {
    return {std::nullopt, "evidence is not a misbehavior artifact"};
  }
  if (claim.accused.value >= accounts_.size()) {
    return {std::nullopt, "accused rollup does not exist"};
  }

  const PoolRecord* rec = pool.get_record(claim.txid);
  const std::uint64_t actual_status = status_word(rec);

  // The claimed kind must hold against the pool's current records.
  switch (claim.claimed) {
    case ClaimKind::ExecutedRejected:
      if (rec == nullptr || rec->status != Status::Rejected) {
        return {std::nullopt, "transaction is not rejected"};
      }
      break;
    case ClaimKind::ExecutedWithoutValidation:
      if (rec != nullptr && is_terminal(rec->status)) {
        return {std::nullopt, "transaction reached a terminal state"};
      }
      break;
    case ClaimKind::SkippedDependency: {
      if (rec == nullptr || rec->status != Status::Committed) {
        return {std::nullopt, "transaction is not committed"};
      }
      bool any_uncommitted_dep = false;
      for (const auto& dep : rec->tx.deps) {
        const PoolRecord* drec = pool.get_record(dep);
        if (drec == nullptr || drec->status != Status::Committed) {
          any_uncommitted_dep = true;
          break;
        }
      }
      if (!any_uncommitted_dep) {
        return {std::nullopt, "all dependencies are committed"};
      }
      break;
    }
  }

  // The evidence must bind a recorded execution claim by the accused.
  bool verified = false;
  for (const auto& exec : execution_claims) {
    if (exec.claimant != claim.accused || exec.txid != claim.txid) continue;
    const auto statement = misbehavior_statement(claim.claimed, claim.accused, claim.txid,
                                                 actual_status, exec.at, exec.digest);
    if (verify_proof(claim.evidence, statement)) {
      verified = true;
      break;
    }
  }
  if (!verified) {
    return {std::nullopt, "evidence does not match the pool's records"};
  }

  StakeAccount& acct = account_mut(claim.accused);
  const std::uint64_t amount = slash_fraction_.floor_mul(acct.staked);
  acct.staked -= amount;
  acct.slashed_total += amount;
  return {SlashEvent{claim.accused, amount, acct.staked, claim.watcher, claim.txid, now}, "ok"};
}

}  // namespace dcp
