// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "core/digest.hpp"
#include "core/types.hpp"
#include "pool/pool.hpp"

namespace dcp {

enum class ProofKind : std::uint8_t {
  Auth = 0,
  DependencyResolution = 1,
  Misbehavior = 2,
};

const char* name(ProofKind k);

/// Constant-size verifiable claim. Verification depends only on the public
/// statement; the witness that produced a claim is never needed (or stored),
/// which is the structural stand-in for the zero-knowledge property.
struct ProofArtifact {
  ProofKind kind = ProofKind::Auth;
  Digest32 statement_digest{};
  Digest32 witness_commitment{};

  static constexpr std::size_t kSerializedSize = 65;  // kind byte + two digests
  std::array<std::uint8_t, kSerializedSize> serialize() const;
  static std::optional<ProofArtifact> deserialize(std::span<const std::uint8_t> bytes);
  bool operator==(const ProofArtifact&) const = default;
};

// --- authenticity -----------------------------------------------------------

/// tag = SHA-256("dcp.auth" || key_id u64be || rollup u32be || seq u64be ||
/// payload_digest). Pass/fail only; no key material is modeled.
AuthToken make_auth_token(std::uint64_t key_id, const TxId& id, const Digest32& payload_digest);

bool verify_auth(const Transaction& tx);

// --- statement encodings ----------------------------------------------------
//
// Common frame (bit-exact across implementations):
//   kind byte || member count u32be || per member in TxId order:
//     rollup u32be || seq u64be || slot u64be
// For DependencyResolution the slot carries the member's canonical timestamp
// (two's-complement i64) and there is no suffix. For Misbehavior there is one
// member (the executed transaction, slot = observed status word) followed by:
//   claim kind byte || accused rollup u32be || claim tick u64be ||
//   execution claim digest (32 bytes)

struct GroupMember {
  TxId txid;
  Tick tau = 0;
};

std::vector<std::uint8_t> dependency_statement(std::vector<GroupMember> members);

enum class ClaimKind : std::uint8_t {
  ExecutedWithoutValidation = 0,
  ExecutedRejected = 1,
  SkippedDependency = 2,
};

const char* name(ClaimKind k);

/// Status word for misbehavior statements: 0xff when the pool has no record,
/// otherwise the Status ordinal.
std::uint64_t status_word(const PoolRecord* rec);

std::vector<std::uint8_t> misbehavior_statement(ClaimKind claim, RollupId accused,
                                                const TxId& txid, std::uint64_t status_word,
                                                Tick claim_tick, const Digest32& exec_digest);

// --- construction and verification ------------------------------------------

/// Honest prover for an arbitrary statement of the given kind.
ProofArtifact make_proof(ProofKind kind, std::span<const std::uint8_t> statement);

/// Statement for a resolved group, read off the pool view. Throws
/// IncompleteGroup when any member lacks tau.
std::vector<std::uint8_t> dependency_statement_for(const std::vector<TxId>& group,
                                                   const Pool& records);

ProofArtifact make_dependency_proof(const std::vector<TxId>& group, const Pool& records);

/// True iff the artifact binds exactly this statement and is internally
/// consistent. Reads nothing but the artifact and the statement bytes.
bool verify_proof(const ProofArtifact& artifact, std::span<const std::uint8_t> statement);

}  // namespace dcp
