// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pool/pool.hpp"
#include "proofs/proofs.hpp"

namespace dcp {

struct StakeAccount {
  RollupId rollup;
  std::uint64_t staked = 0;
  std::uint64_t slashed_total = 0;
};

/// A rollup's public announcement that it executed a transaction. Honest
/// rollups only announce committed transactions; everything else is
/// slashable once a watcher proves it against the pool's records.
struct ExecutionClaim {
  RollupId claimant;
  TxId txid;
  Tick at = 0;
  Digest32 digest{};
};

Digest32 execution_claim_digest(RollupId claimant, const TxId& txid, Tick at);

struct MisbehaviorClaim {
  RollupId accused;
  TxId txid;
  ClaimKind claimed = ClaimKind::ExecutedWithoutValidation;
  ProofArtifact evidence;  // kind must be Misbehavior
  std::uint64_t watcher = 0;
};

struct SlashEvent {
  RollupId accused;
  std::uint64_t amount = 0;
  std::uint64_t remaining = 0;
  std::uint64_t watcher = 0;
  TxId txid;
  Tick at = 0;
};

struct ReportOutcome {
  std::optional<SlashEvent> slash;  // empty means the claim was rejected
  std::string detail;
};

/// Honest watcher evidence over an observed execution claim and the pool
/// state at observation time.
ProofArtifact make_misbehavior_evidence(ClaimKind claim, RollupId accused, const TxId& txid,
                                        std::uint64_t status_word, Tick claim_tick,
                                        const Digest32& exec_digest);

/// Collateral ledger with punitive enforcement. Claims are adjudicated
/// against the pool's own records: the evidence must bind the recorded
/// execution claim and the actual transaction status, so fabricated claims
/// against honest rollups can never slash.
class StakeLedger {
 public:
  StakeLedger(std::uint32_t rollup_count, std::uint64_t min_stake, Rational slash_fraction);

  /// Adds collateral; amount must be positive.
  const StakeAccount& stake(RollupId rollup, std::uint64_t amount);

  /// Publish gate: staked >= min_stake.
  bool may_publish(RollupId rollup) const;

  const StakeAccount& account(RollupId rollup) const;
  const std::vector<StakeAccount>& accounts() const { return accounts_; }

  ReportOutcome report(const MisbehaviorClaim& claim, const Pool& pool,
                       const std::vector<ExecutionClaim>& execution_claims, Tick now);

 private:
  StakeAccount& account_mut(RollupId rollup);

  std::vector<StakeAccount> accounts_;
  std::uint64_t min_stake_;
  Rational slash_fraction_;
};

}  // namespace dcp
