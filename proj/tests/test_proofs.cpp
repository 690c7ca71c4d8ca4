// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "pool/pool.hpp"
#include "proofs/proofs.hpp"

using namespace dcp;

namespace {

Transaction make_tx(std::uint32_t rollup, std::uint64_t seq) {
  Transaction tx;
  tx.id = {rollup, seq};
  tx.payload_digest = sha256("payload:" + to_string(tx.id));
  tx.auth = make_auth_token(rollup, tx.id, tx.payload_digest);
  return tx;
}

}  // namespace

TEST_CASE("honest auth tokens verify; any flipped bit fails") {
  auto tx = make_tx(0, 1);
  CHECK(verify_auth(tx));

  auto forged = tx;
  forged.auth.tag[0] ^= 0x01;
  CHECK(!verify_auth(forged));

  auto other_key = tx;
  other_key.auth.key_id ^= 1;
  CHECK(!verify_auth(other_key));

  auto other_payload = tx;
  other_payload.payload_digest[31] ^= 0x80;
  CHECK(!verify_auth(other_payload));
}

TEST_CASE("dependency proofs verify against their own statement only") {
  std::vector<GroupMember> members{{TxId{0, 0}, 50}, {TxId{1, 0}, 52}};
  const auto statement = dependency_statement(members);
  const auto artifact = make_proof(ProofKind::DependencyResolution, statement);
  CHECK(verify_proof(artifact, statement));

  // Same group with one tau altered in the statement.
  std::vector<GroupMember> altered{{TxId{0, 0}, 50}, {TxId{1, 0}, 53}};
  CHECK(!verify_proof(artifact, dependency_statement(altered)));

  // Member list order must not matter: the encoding sorts by TxId.
  std::vector<GroupMember> reversed{{TxId{1, 0}, 52}, {TxId{0, 0}, 50}};
  CHECK(dependency_statement(reversed) == statement);
}

TEST_CASE("statement encoding is the pinned byte layout") {
  const auto statement = dependency_statement({{TxId{1, 2}, 3}});
  // kind 0x01, count 1, rollup 1, seq 2, tau 3, all big-endian.
  const std::vector<std::uint8_t> expect{
      0x01, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00,
      0x00, 0x00, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x00, 0x00,
      0x00, 0x00, 0x03};
  CHECK(statement == expect);
}

TEST_CASE("artifacts are constant-size regardless of group size") {
  std::optional<std::size_t> size;
  for (std::size_t n : {std::size_t{1}, std::size_t{5}, std::size_t{50}}) {
    std::vector<GroupMember> members;
    for (std::size_t i = 0; i < n; ++i) {
      members.push_back({TxId{0, i}, static_cast<Tick>(100 + i)});
    }
    const auto artifact =
        make_proof(ProofKind::DependencyResolution, dependency_statement(members));
    const auto bytes = artifact.serialize();
    if (!size.has_value()) size = bytes.size();
    CHECK(bytes.size() == *size);
    CHECK(bytes.size() == ProofArtifact::kSerializedSize);
    const auto back = ProofArtifact::deserialize(bytes);
    REQUIRE(back.has_value());
    CHECK(*back == artifact);
  }
}

TEST_CASE("random artifacts from a seeded corpus are never accepted") {
  const auto statement = dependency_statement({{TxId{0, 0}, 10}, {TxId{0, 1}, 11}});
  std::mt19937_64 rng(0xD1CE);
  int accepted = 0;
  for (int i = 0; i < 1000; ++i) {
    ProofArtifact junk;
    junk.kind = static_cast<ProofKind>(rng() % 3);
    for (auto& b : junk.statement_digest) b = static_cast<std::uint8_t>(rng());
    for (auto& b : junk.witness_commitment) b = static_cast<std::uint8_t>(rng());
    if (verify_proof(junk, statement)) ++accepted;
  }
  CHECK(accepted == 0);
}

TEST_CASE("a matching digest with a broken commitment still fails") {
  const auto statement = dependency_statement({{TxId{0, 0}, 1}});
  auto artifact = make_proof(ProofKind::DependencyResolution, statement);
  artifact.witness_commitment[7] ^= 0x10;
  CHECK(!verify_proof(artifact, statement));
}

TEST_CASE("pool-backed dependency proofs need every member timestamped") {
  ProtocolConfig cfg;
  cfg.node_count = 1;
  cfg.quorum = 1;
  cfg.tau_max = 10;
  Pool pool(cfg, {});
  pool.publish(make_tx(0, 0), 0, {}, {});
  pool.publish(make_tx(0, 1), 0, {}, {});
  pool.record_receipt(TxId{0, 0}, 0, 2);

  CHECK_THROWS_AS(make_dependency_proof({TxId{0, 0}, TxId{0, 1}}, pool), Error);

  pool.record_receipt(TxId{0, 1}, 0, 3);
  const auto artifact = make_dependency_proof({TxId{0, 0}, TxId{0, 1}}, pool);
  const auto statement = dependency_statement_for({TxId{0, 0}, TxId{0, 1}}, pool);
  CHECK(verify_proof(artifact, statement));
}

TEST_CASE("verification is independent of transaction payloads") {
  // Two pools whose records differ only in payload bytes produce the same
  // statement, so the verifier provably never looks at payloads.
  ProtocolConfig cfg;
  cfg.node_count = 1;
  cfg.quorum = 1;
  Pool pool_a(cfg, {});
  Pool pool_b(cfg, {});
  auto tx_a = make_tx(0, 0);
  auto tx_b = make_tx(0, 0);
  tx_b.payload_digest = sha256("some entirely different contents");
  tx_b.auth = make_auth_token(0, tx_b.id, tx_b.payload_digest);
  pool_a.publish(tx_a, 0, {}, {});
  pool_b.publish(tx_b, 0, {}, {});
  pool_a.record_receipt(tx_a.id, 0, 5);
  pool_b.record_receipt(tx_b.id, 0, 5);

  const auto artifact = make_dependency_proof({tx_a.id}, pool_a);
  const auto statement_b = dependency_statement_for({tx_b.id}, pool_b);
  CHECK(verify_proof(artifact, statement_b));
}

TEST_CASE("misbehavior statements bind every field") {
  const Digest32 exec = sha256(std::string_view("claim"));
  const auto base = misbehavior_statement(ClaimKind::ExecutedRejected, RollupId{2},
                                          TxId{1, 4}, 4, 77, exec);
  const auto artifact = make_proof(ProofKind::Misbehavior, base);
  CHECK(verify_proof(artifact, base));

  CHECK(!verify_proof(artifact, misbehavior_statement(ClaimKind::ExecutedWithoutValidation,
                                                      RollupId{2}, TxId{1, 4}, 4, 77, exec)));
  CHECK(!verify_proof(artifact, misbehavior_statement(ClaimKind::ExecutedRejected,
                                                      RollupId{1}, TxId{1, 4}, 4, 77, exec)));
  CHECK(!verify_proof(artifact, misbehavior_statement(ClaimKind::ExecutedRejected,
                                                      RollupId{2}, TxId{1, 4}, 3, 77, exec)));
  CHECK(!verify_proof(artifact, misbehavior_statement(ClaimKind::ExecutedRejected,
                                                      RollupId{2}, TxId{1, 4}, 4, 78, exec)));
}
