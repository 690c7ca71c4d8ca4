// SPDX-License-Identifier: Apache-2.0
#include "proofs/proofs.hpp"

#include <algorithm>

namespace dcp {

namespace {

Digest32 commit_witness(ProofKind kind, const Digest32& statement_digest) {
  ByteWriter w;
  w.text("dcp.wc");
  w.u8(static_cast<std::uint8_t>(kind));
  w.digest(statement_digest);
  return sha256(w.view());
}

}  // namespace

const char* name(ProofKind k) {
  switch (k) {
    case ProofKind::Auth: return "auth";
    case ProofKind::DependencyResolution: return "dependency_resolution";
    case ProofKind::Misbehavior: return "misbehavior";
  }
  return "unknown";
}

const char* name(ClaimKind k) {
  switch (k) {
    case ClaimKind::ExecutedWithoutValidation: return "executed_without_validation";
    case ClaimKind::ExecutedRejected: return "executed_rejected";
    case ClaimKind::SkippedDependency: return "skipped_dependency";
  }
  return "unknown";
}

std::array<std::uint8_t, ProofArtifact::kSerializedSize> ProofArtifact::serialize() const {
  std::array<std::uint8_t, kSerializedSize> out{};
  out[0] = static_cast<std::uint8_t>(kind);
  std::copy(statement_digest.begin(), statement_digest.end(), out.begin() + 1);
  std::copy(witness_commitment.begin(), witness_commitment.end(), out.begin() + 33);
  return out;
}

std::optional<ProofArtifact> ProofArtifact::deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kSerializedSize) return std::nullopt;
  if (bytes[0] > static_cast<std::uint8_t>(ProofKind::Misbehavior)) return std::nullopt;
  ProofArtifact a;
  a.kind = static_cast<ProofKind>(bytes[0]);
  std::copy(bytes.begin() + 1, bytes.begin() + 33, a.statement_digest.begin());
  std::copy(bytes.begin() + 33, bytes.end(), a.witness_commitment.begin());
  return a;
}

AuthToken make_auth_token(std::uint64_t key_id, const TxId& id, const Digest32& payload_digest) {
  ByteWriter w;
  w.text("dcp.auth");
  w.u64be(key_id);
  w.u32be(id.rollup);
  w.u64be(id.seq);
  w.digest(payload_digest);
  return AuthToken{key_id, sha256(w.view())};
}

bool verify_auth(const Transaction& tx) {
  return make_auth_token(tx.auth.key_id, tx.id, tx.payload_digest).tag == tx.auth.tag;
}

std::vector<std::uint8_t> dependency_statement(std::vector<GroupMember> members) {
  std::sort(members.begin(), members.end(),
            [](const GroupMember& a, const GroupMember& b) { return a.txid < b.txid; });
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(ProofKind::DependencyResolution));
  w.u32be(static_cast<std::uint32_t>(members.size()));
  for (const auto& m : members) {
    w.u32be(m.txid.rollup);
    w.u64be(m.txid.seq);
    w.tick(m.tau);
  }
  return w.take();
}

std::uint64_t status_word(const PoolRecord* rec) {
  return rec == nullptr ? 0xff : static_cast<std::uint64_t>(rec->status);
}

std::vector<std::uint8_t> misbehavior_statement(ClaimKind claim, RollupId accused,
                                                const TxId& txid, std::uint64_t status_word,
                                                Tick claim_tick, const Digest32& exec_digest) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(ProofKind::Misbehavior));
  w.u32be(1);
  w.u32be(txid.rollup);
  w.u64be(txid.seq);
  w.u64be(status_word);
  w.u8(static_cast<std::uint8_t>(claim));
  w.u32be(accused.value);
  w.tick(claim_tick);
  w.digest(exec_digest);
  return w.take();
}

ProofArtifact make_proof(ProofKind kind, std::span<const std::uint8_t> statement) {
  ProofArtifact a;
  a.kind = kind;
  a.statement_digest = sha256(statement);
  a.witness_commitment = commit_witness(kind, a.statement_digest);
  return a;
}

std::vector<std::uint8_t> dependency_statement_for(const std::vector<TxId>& group,
                                                   const Pool& records) {
  std::vector<GroupMember> members;
  members.reserve(group.size());
  for (const auto& id : group) {
    const PoolRecord* rec = records.get_record(id);
    if (rec == nullptr || !rec->tau.has_value()) {
      throw Error(Errc::IncompleteGroup, "group member lacks tau: " + to_string(id));
    }
    members.push_back({id, *rec->tau});
  }
  return dependency_statement(std::move(members));
}

ProofArtifact make_dependency_proof(const std::vector<TxId>& group, const Pool& records) {
  return make_proof(ProofKind::DependencyResolution, dependency_statement_for(group, records));
}

bool verify_proof(const ProofArtifact& artifact, std::span<const std::uint8_t> statement) {
  if (artifact.statement_digest != sha256(statement)) return false;
  return artifact.witness_commitment == commit_witness(artifact.kind, artifact.statement_digest);
}

}  // namespace dcp
