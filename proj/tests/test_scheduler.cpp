// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "oracles.hpp"
#include "proofs/proofs.hpp"
#include "scheduler/scheduler.hpp"

using namespace dcp;

namespace {

// Single-node pool: record_receipt(txid, 0, t) pins tau to exactly t.
struct Fixture {
  explicit Fixture(ProtocolConfig c = default_config()) : cfg(c), pool(cfg, {}), sched(cfg, pool) {}

  static ProtocolConfig default_config() {
    ProtocolConfig cfg;
    cfg.node_count = 1;
    cfg.quorum = 1;
    cfg.delta = 5;
    cfg.tau_max = 50;
    cfg.buffer_max = 8;
    cfg.deps_max = 3;
    return cfg;
  }

  TxId publish(std::uint32_t rollup, std::uint64_t seq, std::vector<TxId> deps = {},
               bool forged = false) {
    Transaction tx;
    tx.id = {rollup, seq};
    tx.deps = std::move(deps);
    std::sort(tx.deps.begin(), tx.deps.end());
    tx.payload_digest = sha256("payload:" + to_string(tx.id));
    tx.auth = make_auth_token(rollup, tx.id, tx.payload_digest);
    if (forged) tx.auth.tag[0] ^= 0x01;
    auto res = pool.publish(tx, 0, {}, {});
    REQUIRE(!res.refused.has_value());
    return tx.id;
  }

  void timestamp(const TxId& id, Tick tau) {
    REQUIRE(pool.record_receipt(id, 0, tau) == tau);
  }

  Status status(const TxId& id) const { return pool.get_record(id)->status; }

  ProtocolConfig cfg;
  Pool pool;
  Scheduler sched;
};

}  // namespace

TEST_CASE("compatible applies an inclusive bound") {
  CHECK(compatible(100, 100, 0));
  CHECK(!compatible(100, 105, 4));
  CHECK(compatible(100, 104, 4));
  CHECK(compatible(104, 100, 4));
  CHECK(!compatible(-10, 10, 19));
  CHECK(compatible(-10, 10, 20));
}

TEST_CASE("dependency-free admission commits immediately") {
  Fixture f;
  const auto a = f.publish(0, 0);
  f.timestamp(a, 10);
  const auto result = f.sched.admit(a, 10);
  CHECK(result.kind == AdmitResult::Kind::Committed);
  CHECK(result.group == std::vector<TxId>{a});
  CHECK(f.status(a) == Status::Committed);
}

TEST_CASE("an unpublished dependency buffers the admission") {
  Fixture f;
  const auto a = f.publish(0, 0, {TxId{1, 0}});
  f.timestamp(a, 10);
  const auto result = f.sched.admit(a, 10);
  CHECK(result.kind == AdmitResult::Kind::Buffered);
  CHECK(f.status(a) == Status::Buffered);
  REQUIRE(f.sched.buffered(a) != nullptr);
  CHECK(f.sched.buffered(a)->attempts == 0);
  CHECK(f.sched.buffered(a)->entered_at == 10);
}

TEST_CASE("a two-cycle commits atomically when the later member is admitted") {
  Fixture f;
  const auto a = f.publish(0, 0, {TxId{1, 0}});
  const auto b = f.publish(1, 0, {TxId{0, 0}});
  f.timestamp(a, 50);
  CHECK(f.sched.admit(a, 50).kind == AdmitResult::Kind::Buffered);
  f.timestamp(b, 52);
  const auto result = f.sched.admit(b, 52);
  CHECK(result.kind == AdmitResult::Kind::Committed);
  CHECK(result.group == std::vector<TxId>{a, b});
  CHECK(oracle::pairwise_compatible({50, 52}, f.cfg.delta));
  CHECK(f.status(a) == Status::Committed);
  CHECK(f.status(b) == Status::Committed);
  CHECK(f.sched.buffer_size() == 0);
}

TEST_CASE("incompatible timestamps buffer even when fully resolved") {
  Fixture f;  // delta = 5
  const auto a = f.publish(0, 0, {TxId{1, 0}});
  const auto b = f.publish(1, 0, {TxId{0, 0}});
  f.timestamp(a, 10);
  f.sched.admit(a, 10);
  f.timestamp(b, 16);  // gap 6 > 5
  CHECK(!oracle::pairwise_compatible({10, 16}, f.cfg.delta));
  const auto result = f.sched.admit(b, 16);
  CHECK(result.kind == AdmitResult::Kind::Buffered);
}

TEST_CASE("committed dependencies anchor the delta check with their recorded tau") {
  Fixture f;  // delta = 5
  const auto d = f.publish(0, 0);
  f.timestamp(d, 10);
  REQUIRE(f.sched.admit(d, 10).kind == AdmitResult::Kind::Committed);

  const auto near = f.publish(0, 1, {d});
  f.timestamp(near, 14);
  CHECK(f.sched.admit(near, 14).kind == AdmitResult::Kind::Committed);

  const auto far = f.publish(0, 2, {d});
  f.timestamp(far, 40);  // 30 away from the committed anchor
  CHECK(f.sched.admit(far, 40).kind == AdmitResult::Kind::Buffered);
}

TEST_CASE("admission observing a rejected dependency rejects immediately") {
  Fixture f;
  const auto a = f.publish(0, 0);
  f.timestamp(a, 10);
  f.sched.reject(a, RejectReason::TimedOut, 70);
  const auto b = f.publish(0, 1, {a});
  f.timestamp(b, 71);
  const auto result = f.sched.admit(b, 71);
  CHECK(result.kind == AdmitResult::Kind::Rejected);
  CHECK(result.reason == RejectReason::DependencyRejected);
  CHECK(f.status(b) == Status::Rejected);
}

TEST_CASE("empty buffer sweep produces nothing") {
  Fixture f;
  const auto result = f.sched.sweep(100);
  CHECK(result.actions.empty());
  CHECK(result.occupancy_start == 0);
  CHECK(result.occupancy_end == 0);
  CHECK(f.sched.drain_notifications().empty());
}

TEST_CASE("timeout sweep rejects and notifies") {
  ProtocolConfig cfg = Fixture::default_config();
  cfg.tau_max = 5;
  Fixture f(cfg);
  const auto a = f.publish(3, 0, {TxId{1, 0}});
  f.timestamp(a, 10);
  f.sched.admit(a, 10);
  const auto result = f.sched.sweep(20);  // 20 - 10 > 5
  REQUIRE(result.actions.size() == 1);
  CHECK(result.actions[0].kind == SchedulerAction::Kind::Reject);
  CHECK(result.actions[0].reason == RejectReason::TimedOut);
  CHECK(f.status(a) == Status::Rejected);
  const auto notes = f.sched.drain_notifications();
  REQUIRE(notes.size() == 1);
  CHECK(notes[0].txid == a);
  CHECK(notes[0].target == RollupId{3});
  CHECK(notes[0].reason == RejectReason::TimedOut);
  CHECK(notes[0].issued_at == 20);
}

TEST_CASE("the timeout boundary is strict") {
  ProtocolConfig cfg = Fixture::default_config();
  cfg.tau_max = 10;
  Fixture f(cfg);
  const auto a = f.publish(0, 0, {TxId{1, 0}});
  f.timestamp(a, 10);
  f.sched.admit(a, 10);
  CHECK(f.sched.sweep(20).actions.empty());  // 20 - 10 == tau_max survives
  const auto result = f.sched.sweep(21);
  REQUIRE(result.actions.size() == 1);
  CHECK(result.actions[0].reason == RejectReason::TimedOut);
}

TEST_CASE("sweeping resolves entries whose dependencies arrived") {
  Fixture f;
  const auto a = f.publish(0, 0, {TxId{1, 0}});
  f.timestamp(a, 10);
  f.sched.admit(a, 10);
  const auto b = f.publish(1, 0);
  f.timestamp(b, 12);
  // b commits alone at admission; a resolves at the next sweep.
  REQUIRE(f.sched.admit(b, 12).kind == AdmitResult::Kind::Committed);
  const auto result = f.sched.sweep(13);
  REQUIRE(result.actions.size() == 1);
  CHECK(result.actions[0].kind == SchedulerAction::Kind::Commit);
  CHECK(result.actions[0].txid == a);
  CHECK(result.actions[0].root == a);
  CHECK(f.status(a) == Status::Committed);
}

TEST_CASE("attempts count failing sweeps and stop at deps_max") {
  ProtocolConfig cfg = Fixture::default_config();
  cfg.deps_max = 2;
  cfg.tau_max = 1000;
  Fixture f(cfg);
  const auto a = f.publish(0, 0, {TxId{9, 9}});
  f.timestamp(a, 0);
  f.sched.admit(a, 0);

  CHECK(f.sched.sweep(1).actions.empty());
  CHECK(f.sched.buffered(a)->attempts == 1);
  CHECK(f.sched.sweep(2).actions.empty());
  CHECK(f.sched.buffered(a)->attempts == 2);

  // Third failing pass would exceed deps_max.
  const auto result = f.sched.sweep(3);
  REQUIRE(result.actions.size() == 1);
  CHECK(result.actions[0].reason == RejectReason::AttemptsExhausted);
  CHECK(result.actions[0].attempts == 2);
  CHECK(f.status(a) == Status::Rejected);
}

TEST_CASE("the final examination still resolves if it can") {
  ProtocolConfig cfg = Fixture::default_config();
  cfg.deps_max = 1;
  cfg.tau_max = 1000;
  cfg.delta = 1000;
  Fixture f(cfg);
  const auto a = f.publish(0, 0, {TxId{1, 0}});
  f.timestamp(a, 0);
  f.sched.admit(a, 0);
  CHECK(f.sched.sweep(1).actions.empty());  // attempts -> 1 == deps_max
  const auto b = f.publish(1, 0);
  f.timestamp(b, 2);
  f.sched.admit(b, 2);
  const auto result = f.sched.sweep(3);
  REQUIRE(result.actions.size() == 1);
  CHECK(result.actions[0].kind == SchedulerAction::Kind::Commit);
  CHECK(f.status(a) == Status::Committed);
}

TEST_CASE("rejecting one member of a three-cycle drags the rest down in the same sweep") {
  ProtocolConfig cfg = Fixture::default_config();
  cfg.tau_max = 5;
  cfg.delta = 0;  // keeps the cycle unresolvable so it stays buffered
  Fixture f(cfg);
  const auto a = f.publish(0, 0, {TxId{1, 0}});
  const auto b = f.publish(1, 0, {TxId{2, 0}});
  const auto c = f.publish(2, 0, {TxId{0, 0}});
  f.timestamp(a, 10);
  f.sched.admit(a, 10);
  f.timestamp(b, 12);
  f.sched.admit(b, 12);
  f.timestamp(c, 14);
  f.sched.admit(c, 14);
  REQUIRE(f.sched.buffer_size() == 3);

  // now=16: only a (tau 10) exceeds tau_max; b and c must follow as
  // dependency rejections within this sweep.
  const auto result = f.sched.sweep(16);
  REQUIRE(result.actions.size() == 3);
  CHECK(result.actions[0].txid == a);
  CHECK(result.actions[0].reason == RejectReason::TimedOut);
  int dep_rejections = 0;
  for (const auto& action : result.actions) {
    if (action.reason == RejectReason::DependencyRejected) ++dep_rejections;
  }
  CHECK(dep_rejections == 2);
  CHECK(f.sched.buffer_size() == 0);
  CHECK(f.sched.drain_notifications().size() == 3);
}

TEST_CASE("capacity pressure evicts oldest tau first") {
  ProtocolConfig cfg = Fixture::default_config();
  cfg.buffer_max = 2;
  cfg.tau_max = 1000;
  Fixture f(cfg);
  const auto a = f.publish(0, 0, {TxId{9, 0}});
  const auto b = f.publish(0, 1, {TxId{9, 1}});
  const auto c = f.publish(0, 2, {TxId{9, 2}});
  f.timestamp(a, 30);
  f.sched.admit(a, 30);
  f.timestamp(b, 10);
  f.sched.admit(b, 10);
  f.timestamp(c, 20);
  f.sched.admit(c, 20);
  REQUIRE(f.sched.buffer_size() == 3);

  const auto result = f.sched.sweep(31);
  REQUIRE(result.actions.size() == 1);
  CHECK(result.actions[0].txid == b);  // oldest tau
  CHECK(result.actions[0].reason == RejectReason::BufferEvicted);
  CHECK(f.sched.buffer_size() == 2);
  CHECK(f.status(b) == Status::Rejected);
}

TEST_CASE("reject is terminal-guarded and removes the buffer entry") {
  Fixture f;
  const auto a = f.publish(0, 0, {TxId{1, 0}});
  f.timestamp(a, 10);
  f.sched.admit(a, 10);
  REQUIRE(f.sched.buffer_size() == 1);
  const auto note = f.sched.reject(a, RejectReason::TimedOut, 60);
  CHECK(note.txid == a);
  CHECK(f.sched.buffer_size() == 0);
  CHECK_THROWS_AS(f.sched.reject(a, RejectReason::TimedOut, 61), Error);

  const auto b = f.publish(0, 1);
  f.timestamp(b, 12);
  f.sched.admit(b, 12);
  CHECK_THROWS_AS(f.sched.reject(b, RejectReason::TimedOut, 13), Error);
}

TEST_CASE("a group never commits through an unverified member") {
  // B is forged and still awaiting its own admission (where authenticity is
  // checked). Admitting A must not sweep B into a commit.
  Fixture f;
  const auto a = f.publish(0, 0, {TxId{1, 0}});
  const auto b = f.publish(1, 0, {TxId{0, 0}}, /*forged=*/true);
  f.timestamp(a, 10);
  f.sched.admit(a, 10);
  f.timestamp(b, 11);
  CHECK(f.sched.fast_path_resolve(11).empty());
  CHECK(f.status(a) == Status::Buffered);
  CHECK(f.status(b) == Status::Timestamped);

  // B's admission settles it: auth fails, and the next sweep drags A down.
  f.sched.reject(b, RejectReason::AuthFailed, 11);
  const auto result = f.sched.sweep(12);
  REQUIRE(result.actions.size() == 1);
  CHECK(result.actions[0].txid == a);
  CHECK(result.actions[0].reason == RejectReason::DependencyRejected);
}

TEST_CASE("fast path commits a waiting dependent without a sweep") {
  Fixture f;
  const auto a = f.publish(0, 0, {TxId{1, 0}});
  f.timestamp(a, 10);
  f.sched.admit(a, 10);
  const auto b = f.publish(1, 0);
  f.timestamp(b, 12);
  REQUIRE(f.sched.admit(b, 12).kind == AdmitResult::Kind::Committed);

  const auto actions = f.sched.fast_path_resolve(12);
  REQUIRE(actions.size() == 1);
  CHECK(actions[0].txid == a);
  CHECK(f.status(a) == Status::Committed);
}

TEST_CASE("fast path never resurrects an expired entry") {
  ProtocolConfig cfg = Fixture::default_config();
  cfg.tau_max = 5;
  Fixture f(cfg);
  const auto a = f.publish(0, 0, {TxId{1, 0}});
  f.timestamp(a, 0);
  f.sched.admit(a, 0);
  const auto b = f.publish(1, 0);
  f.timestamp(b, 6);
  f.sched.admit(b, 6);
  CHECK(f.sched.fast_path_resolve(6).empty());  // 6 - 0 > tau_max
  const auto result = f.sched.sweep(6);
  REQUIRE(result.actions.size() == 1);
  CHECK(result.actions[0].reason == RejectReason::TimedOut);
}

TEST_CASE("notification multiset matches rejections one to one") {
  ProtocolConfig cfg = Fixture::default_config();
  cfg.tau_max = 3;
  cfg.buffer_max = 1;
  cfg.deps_max = 1;
  Fixture f(cfg);
  std::vector<TxId> all;
  for (std::uint64_t i = 0; i < 4; ++i) {
    const auto id = f.publish(0, i, {TxId{9, i}});
    f.timestamp(id, static_cast<Tick>(i));
    f.sched.admit(id, static_cast<Tick>(i));
    all.push_back(id);
  }
  f.sched.sweep(10);
  f.sched.sweep(11);
  f.sched.sweep(12);

  std::multiset<TxId> rejected;
  for (const auto& id : all) {
    if (f.status(id) == Status::Rejected) rejected.insert(id);
  }
  std::multiset<TxId> notified;
  for (const auto& n : f.sched.drain_notifications()) notified.insert(n.txid);
  CHECK(rejected == notified);
  CHECK(rejected.size() == all.size());
}
