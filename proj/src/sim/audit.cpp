// SPDX-License-Identifier: Apache-2.0
#include "sim/audit.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "core/types.hpp"

namespace dcp::sim {

namespace {

using nlohmann::json;

struct TxAudit {
  bool published = false;
  Tick published_tick = 0;
  std::vector<TxId> deps;
  std::set<std::uint32_t> receipt_nodes;
  std::vector<Tick> receipt_times;  // arrival order
  std::optional<Tick> tau;
  Status status = Status::Pending;
  std::optional<std::string> reject_reason;
  std::optional<Tick> committed_tick;
  std::optional<Tick> rejected_tick;
  std::uint32_t fails = 0;  // unresolved sweep examinations survived
};

struct Header {
  std::uint32_t node_count = 1;
  std::uint32_t quorum = 1;
  Tick delta = 0;
  Tick tau_max = 1;
  std::uint64_t buffer_max = 1;
  std::uint32_t deps_max = 1;
  std::uint64_t min_stake = 0;
  std::uint64_t slash_num = 1;
  std::uint64_t slash_den = 1;
  bool fast_path = false;
  Tick sweep_interval = 1;
  std::uint32_t rollup_count = 1;
  std::vector<std::uint64_t> initial_stakes;
  Tick end_tick = 0;
};

class Auditor {
 public:
  AuditReport run(std::string_view text);

 private:
  void fail(std::size_t line, const std::string& message) {
    report_.violations.push_back("line " + std::to_string(line) + ": " + message);
  }

  bool read_header(const json& j, std::size_t line);
  void handle_event(const json& j, std::size_t line);
  void finish();

  // Independent transitive closure (Floyd-Warshall over the adjacency
  // matrix of published dependencies).
  std::map<TxId, std::set<TxId>> closures() const;

  void transition(TxAudit& tx, Status next, std::size_t line, const std::string& what);

  AuditReport report_;
  Header header_;
  bool header_seen_ = false;

  std::map<TxId, TxAudit> txs_;
  std::vector<std::uint64_t> stakes_;
  std::vector<std::uint64_t> slashed_;
  std::set<std::pair<std::uint32_t, TxId>> exec_claims_;          // (rollup, tx)
  std::map<std::pair<std::uint32_t, TxId>, Tick> exec_claim_at_;  // earliest
  std::vector<std::tuple<TxId, std::string, Tick>> notifications_;
  std::vector<std::tuple<TxId, std::string, Tick>> rejections_;

  Tick last_tick_ = 0;
  int last_phase_ = -1;
  bool any_event_ = false;
  bool in_sweep_ = false;
  std::set<TxId> buffered_;
  std::set<TxId> sweep_start_set_;
  std::set<TxId> sweep_touched_;  // committed or rejected during this sweep
};

std::optional<TxId> txid_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) return std::nullopt;
  return parse_txid(j[key].get<std::string>());
}

int phase_of(const std::string& kind, bool in_sweep) {
  if (kind == "staked") return 0;
  if (kind == "published" || kind == "publish_refused") return 1;
  if (kind == "delivered") return 2;
  if (kind == "timestamp_assigned") return 3;
  if (kind == "admitted" || kind == "buffered") return 4;
  if (kind == "committed" || kind == "rejected") return in_sweep ? 7 : 4;
  if (kind == "execution_claimed") return 5;
  if (kind == "slashed" || kind == "claim_rejected") return 6;
  if (kind == "sweep_start" || kind == "sweep_end") return 7;
  if (kind == "notified") return 8;
  return -1;
}

}  // namespace

std::string AuditReport::str() const {
  std::ostringstream out;
  for (const auto& v : violations) out << v << '\n';
  return out.str();
}

bool Auditor::read_header(const json& j, std::size_t line) {
  if (!j.contains("kind") || j["kind"] != "run_header") {
    fail(line, "first record must be the run_header");
    return false;
  }
  try {
    header_.node_count = j.at("node_count").get<std::uint32_t>();
    header_.quorum = j.at("quorum").get<std::uint32_t>();
    header_.delta = j.at("delta").get<Tick>();
    header_.tau_max = j.at("tau_max").get<Tick>();
    header_.buffer_max = j.at("buffer_max").get<std::uint64_t>();
    header_.deps_max = j.at("deps_max").get<std::uint32_t>();
    header_.min_stake = j.at("min_stake").get<std::uint64_t>();
    header_.slash_num = j.at("slash_num").get<std::uint64_t>();
    header_.slash_den = j.at("slash_den").get<std::uint64_t>();
    header_.fast_path = j.at("fast_path").get<bool>();
    header_.sweep_interval = j.at("sweep_interval").get<Tick>();
    header_.rollup_count = j.at("rollup_count").get<std::uint32_t>();
    header_.initial_stakes = j.at("initial_stakes").get<std::vector<std::uint64_t>>();
    header_.end_tick = j.at("end_tick").get<Tick>();
  } catch (const json::exception& e) {
    fail(line, std::string("malformed run_header: ") + e.what());
    return false;
  }
  stakes_.assign(header_.rollup_count, 0);
  slashed_.assign(header_.rollup_count, 0);
  header_seen_ = true;
  return true;
}

void Auditor::transition(TxAudit& tx, Status next, std::size_t line, const std::string& what) {
  if (!legal_transition(tx.status, next)) {
    fail(line, what + ": illegal transition " + std::string(name(tx.status)) + " -> " +
                   name(next));
    return;
  }
  tx.status = next;
}

void Auditor::handle_event(const json& j, std::size_t line) {
  if (!j.contains("tick") || !j.contains("kind") || !j["kind"].is_string()) {
    fail(line, "record lacks tick or kind");
    return;
  }
  const Tick tick = j["tick"].get<Tick>();
  const std::string kind = j["kind"].get<std::string>();

  if (any_event_ && tick < last_tick_) {
    fail(line, "ticks must be non-decreasing");
  }
  if (tick > header_.end_tick) {
    fail(line, "event after end_tick");
  }
  const int phase = phase_of(kind, in_sweep_);
  if (phase < 0) {
    fail(line, "unknown event kind: " + kind);
    return;
  }
  if (any_event_ && tick == last_tick_ && phase < last_phase_) {
    fail(line, "intra-tick phase order violated by " + kind);
  }
  last_tick_ = tick;
  last_phase_ = phase;
  any_event_ = true;

  if (kind == "staked") {
    const auto rollup = j.at("rollup").get<std::uint32_t>();
    if (rollup >= header_.rollup_count) {
      fail(line, "staked: rollup out of range");
      return;
    }
    stakes_[rollup] += j.at("amount").get<std::uint64_t>();
    if (stakes_[rollup] != j.at("total").get<std::uint64_t>()) {
      fail(line, "staked: running total mismatch");
    }
    return;
  }

  if (kind == "published") {
    const auto id = txid_field(j, "tx");
    if (!id.has_value()) {
      fail(line, "published: bad tx");
      return;
    }
    auto& tx = txs_[*id];
    if (tx.published) {
      fail(line, "published twice: " + to_string(*id));
      return;
    }
    tx.published = true;
    tx.published_tick = tick;
    if (j.contains("deps")) {
      for (const auto& dep : j["deps"]) {
        const auto did = parse_txid(dep.get<std::string>());
        if (did.has_value()) tx.deps.push_back(*did);
      }
    }
    if (stakes_.at(id->rollup) < header_.min_stake) {
      fail(line, "published while under-staked: " + to_string(*id));
    }
    return;
  }

  if (kind == "publish_refused") {
    const auto id = txid_field(j, "tx");
    const auto reason = j.at("reason").get<std::string>();
    if (!id.has_value()) {
      fail(line, "publish_refused: bad tx");
      return;
    }
    if (reason == "insufficient_stake") {
      if (stakes_.at(id->rollup) >= header_.min_stake) {
        fail(line, "refusal claims insufficient stake but the rollup is collateralized");
      }
    } else if (reason == "duplicate_txid") {
      if (!txs_.contains(*id) || !txs_[*id].published) {
        fail(line, "duplicate refusal without a prior publish");
      }
    } else {
      fail(line, "publish_refused: unknown reason " + reason);
    }
    return;
  }

  if (kind == "delivered") {
    const auto id = txid_field(j, "tx");
    const auto node = j.at("node").get<std::uint32_t>();
    if (!id.has_value() || !txs_.contains(*id) || !txs_[*id].published) {
      fail(line, "delivery for unpublished tx");
      return;
    }
    auto& tx = txs_[*id];
    if (node >= header_.node_count) fail(line, "delivered: node out of range");
    if (!tx.receipt_nodes.insert(node).second) {
      fail(line, "node receipted twice: " + to_string(*id));
    }
    if (tick < tx.published_tick) fail(line, "delivery before publish");
    tx.receipt_times.push_back(j.at("time").get<Tick>());
    return;
  }

  if (kind == "timestamp_assigned") {
    const auto id = txid_field(j, "tx");
    if (!id.has_value() || !txs_.contains(*id)) {
      fail(line, "timestamp for unknown tx");
      return;
    }
    auto& tx = txs_[*id];
    if (tx.tau.has_value()) {
      fail(line, "tau assigned twice for " + to_string(*id));
      return;
    }
    if (tx.receipt_times.size() < header_.quorum) {
      fail(line, "tau before quorum for " + to_string(*id));
      return;
    }
    // q-th order statistic of the first q receipts in arrival order.
    std::vector<Tick> first_q(tx.receipt_times.begin(),
                              tx.receipt_times.begin() + header_.quorum);
    std::sort(first_q.begin(), first_q.end());
    const Tick expect = first_q[header_.quorum - 1];
    const Tick got = j.at("tau").get<Tick>();
    if (got != expect) {
      fail(line, "tau mismatch for " + to_string(*id) + ": got " + std::to_string(got) +
                     ", expected " + std::to_string(expect));
    }
    tx.tau = got;
    transition(tx, Status::Timestamped, line, to_string(*id));
    return;
  }

  if (kind == "admitted") {
    const auto id = txid_field(j, "tx");
    if (!id.has_value() || !txs_.contains(*id) || !txs_[*id].tau.has_value()) {
      fail(line, "admission without a timestamp");
    }
    const auto outcome = j.at("outcome").get<std::string>();
    if (outcome != "committed" && outcome != "buffered" && outcome != "rejected") {
      fail(line, "admitted: unknown outcome " + outcome);
    }
    return;
  }

  if (kind == "buffered") {
    const auto id = txid_field(j, "tx");
    if (!id.has_value() || !txs_.contains(*id)) {
      fail(line, "buffered: unknown tx");
      return;
    }
    if (in_sweep_) fail(line, "buffered inside a sweep");
    transition(txs_[*id], Status::Buffered, line, to_string(*id));
    buffered_.insert(*id);
    return;
  }

  if (kind == "committed") {
    const auto id = txid_field(j, "tx");
    if (!id.has_value() || !txs_.contains(*id)) {
      fail(line, "committed: unknown tx");
      return;
    }
    auto& tx = txs_[*id];
    transition(tx, Status::Committed, line, to_string(*id));
    tx.committed_tick = tick;
    buffered_.erase(*id);
    if (in_sweep_) sweep_touched_.insert(*id);
    const auto via = j.at("via").get<std::string>();
    if (via == "fast_path" && !header_.fast_path) {
      fail(line, "fast_path commit with fast_path disabled");
    } else if (via == "sweep" && !in_sweep_) {
      fail(line, "sweep commit outside a sweep");
    } else if (via == "admit" && in_sweep_) {
      fail(line, "admit commit inside a sweep");
    } else if (via != "fast_path" && via != "sweep" && via != "admit") {
      fail(line, "committed: unknown via " + via);
    }
    return;
  }

  if (kind == "rejected") {
    const auto id = txid_field(j, "tx");
    if (!id.has_value() || !txs_.contains(*id)) {
      fail(line, "rejected: unknown tx");
      return;
    }
    auto& tx = txs_[*id];
    const auto reason = j.at("reason").get<std::string>();
    if (!reject_reason_from_name(reason).has_value()) {
      fail(line, "rejected: unknown reason " + reason);
    }
    transition(tx, Status::Rejected, line, to_string(*id));
    tx.reject_reason = reason;
    tx.rejected_tick = tick;
    buffered_.erase(*id);
    if (in_sweep_) sweep_touched_.insert(*id);
    rejections_.emplace_back(*id, reason, tick);

    if (reason == "timed_out") {
      if (!tx.tau.has_value() || tick - *tx.tau <= header_.tau_max) {
        fail(line, "timed_out rejection before the deadline: " + to_string(*id));
      }
    }
    if (reason == "attempts_exhausted") {
      if (tx.fails != header_.deps_max) {
        fail(line, "attempts_exhausted after " + std::to_string(tx.fails) +
                       " failed passes, deps_max is " + std::to_string(header_.deps_max));
      }
      if (j.at("attempts").get<std::uint32_t>() != header_.deps_max) {
        fail(line, "attempts field disagrees with deps_max");
      }
    }
    return;
  }

  if (kind == "execution_claimed") {
    const auto id = txid_field(j, "tx");
    const auto rollup = j.at("rollup").get<std::uint32_t>();
    if (!id.has_value()) {
      fail(line, "execution_claimed: bad tx");
      return;
    }
    exec_claims_.insert({rollup, *id});
    const auto key = std::make_pair(rollup, *id);
    if (!exec_claim_at_.contains(key)) exec_claim_at_[key] = tick;
    return;
  }

  if (kind == "slashed") {
    const auto id = txid_field(j, "tx");
    const auto rollup = j.at("rollup").get<std::uint32_t>();
    const auto amount = j.at("amount").get<std::uint64_t>();
    const auto remaining = j.at("remaining").get<std::uint64_t>();
    if (rollup >= header_.rollup_count || !id.has_value()) {
      fail(line, "slashed: bad fields");
      return;
    }
    const std::uint64_t before = stakes_[rollup];
    const std::uint64_t expect =
        static_cast<std::uint64_t>((static_cast<unsigned __int128>(before) * header_.slash_num) /
                                   header_.slash_den);
    if (amount != expect) {
      fail(line, "slash amount " + std::to_string(amount) + " != floor(fraction * stake) = " +
                     std::to_string(expect));
    }
    if (remaining != before - amount) fail(line, "slashed: remaining mismatch");
    stakes_[rollup] = before - amount;
    slashed_[rollup] += amount;

    if (!exec_claims_.contains({rollup, *id})) {
      fail(line, "slash without a recorded execution claim");
    } else if (exec_claim_at_.at({rollup, *id}) > tick) {
      fail(line, "slash precedes the execution claim");
    }
    const auto it = txs_.find(*id);
    if (it != txs_.end() && it->second.committed_tick.has_value() &&
        *it->second.committed_tick <= tick) {
      fail(line, "slash for a transaction that was committed at the time");
    }
    return;
  }

  if (kind == "claim_rejected") {
    return;  // informational
  }

  if (kind == "sweep_start") {
    if (in_sweep_) fail(line, "nested sweep");
    in_sweep_ = true;
    sweep_start_set_ = buffered_;
    sweep_touched_.clear();
    if (j.at("occupancy").get<std::uint64_t>() != buffered_.size()) {
      fail(line, "sweep_start occupancy disagrees with replayed buffer size");
    }
    return;
  }

  if (kind == "sweep_end") {
    if (!in_sweep_) {
      fail(line, "sweep_end without sweep_start");
      return;
    }
    in_sweep_ = false;
    if (j.at("occupancy").get<std::uint64_t>() != buffered_.size()) {
      fail(line, "sweep_end occupancy disagrees with replayed buffer size");
    }
    if (buffered_.size() > header_.buffer_max) {
      fail(line, "buffer exceeds buffer_max at a sweep boundary");
    }
    for (const auto& id : buffered_) {
      const auto& tx = txs_.at(id);
      if (tx.tau.has_value() && tick - *tx.tau > header_.tau_max) {
        fail(line, "overdue tx still buffered at sweep boundary: " + to_string(id));
      }
      if (sweep_start_set_.contains(id)) {
        auto& fails = txs_.at(id).fails;
        ++fails;
        if (fails > header_.deps_max) {
          fail(line, "attempt budget exceeded for " + to_string(id));
        }
      }
    }
    return;
  }

  if (kind == "notified") {
    const auto id = txid_field(j, "tx");
    const auto rollup = j.at("rollup").get<std::uint32_t>();
    const auto reason = j.at("reason").get<std::string>();
    if (!id.has_value()) {
      fail(line, "notified: bad tx");
      return;
    }
    if (rollup != id->rollup) fail(line, "notification target is not the origin rollup");
    notifications_.emplace_back(*id, reason, tick);
    return;
  }
}

std::map<TxId, std::set<TxId>> Auditor::closures() const {
  std::vector<TxId> ids;
  for (const auto& [id, tx] : txs_) {
    if (tx.published) ids.push_back(id);
  }
  const std::size_t n = ids.size();
  auto index_of = [&](const TxId& id) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& dep : txs_.at(ids[i]).deps) {
      const auto k = index_of(dep);
      if (k < n && ids[k] == dep) reach[i][k] = true;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  std::map<TxId, std::set<TxId>> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto& closure = out[ids[i]];
    closure.insert(ids[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (reach[i][j]) closure.insert(ids[j]);
    }
  }
  return out;
}

void Auditor::finish() {
  if (in_sweep_) {
    report_.violations.push_back("trace ends inside a sweep");
  }

  const auto closure_map = closures();
  for (const auto& [id, tx] : txs_) {
    if (!tx.published) continue;
    if (tx.status == Status::Committed) {
      // Atomicity: the whole closure of a committed tx must be committed.
      for (const auto& member : closure_map.at(id)) {
        if (txs_.at(member).status != Status::Committed) {
          report_.violations.push_back("partially committed closure: " + to_string(id) +
                                       " committed but " + to_string(member) + " is " +
                                       name(txs_.at(member).status));
        }
      }
      // Delta rule over the committed closure, every pair.
      for (const auto& a : closure_map.at(id)) {
        for (const auto& b : closure_map.at(id)) {
          if (!(a < b)) continue;
          const auto& ta = txs_.at(a).tau;
          const auto& tb = txs_.at(b).tau;
          if (!ta.has_value() || !tb.has_value()) {
            report_.violations.push_back("committed member without tau");
            continue;
          }
          const Tick diff = *ta >= *tb ? *ta - *tb : *tb - *ta;
          if (diff > header_.delta) {
            report_.violations.push_back(
                "delta violation in committed closure: |tau(" + to_string(a) + ") - tau(" +
                to_string(b) + ")| = " + std::to_string(diff) + " > " +
                std::to_string(header_.delta));
          }
        }
      }
    }
    if (!is_terminal(tx.status)) {
      // Unsettled is legitimate only when the run ended before the
      // timeout machinery could possibly fire.
      if (tx.tau.has_value() &&
          header_.end_tick - *tx.tau >= header_.tau_max + header_.sweep_interval) {
        report_.violations.push_back("unsettled despite sufficient time: " + to_string(id));
      }
    }
  }

  // Notification bijection by (tx, reason, tick).
  auto notes = notifications_;
  auto rejects = rejections_;
  std::sort(notes.begin(), notes.end());
  std::sort(rejects.begin(), rejects.end());
  if (notes != rejects) {
    report_.violations.push_back("notifications and rejections are not in bijection (" +
                                 std::to_string(notes.size()) + " vs " +
                                 std::to_string(rejects.size()) + ")");
  }

  // Stake conservation against the header's initial allocation.
  for (std::uint32_t r = 0; r < header_.rollup_count; ++r) {
    if (stakes_[r] + slashed_[r] != header_.initial_stakes[r]) {
      report_.violations.push_back("stake conservation broken for rollup " + std::to_string(r));
    }
  }
}

AuditReport Auditor::run(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      fail(line_no, "malformed record");
      continue;
    }
    if (!header_seen_) {
      if (!read_header(j, line_no)) return std::move(report_);
      continue;
    }
    try {
      handle_event(j, line_no);
    } catch (const json::exception& e) {
      fail(line_no, std::string("missing or mistyped field: ") + e.what());
    }
  }
  if (!header_seen_) {
    report_.violations.push_back("empty trace");
    return std::move(report_);
  }
  finish();
  return std::move(report_);
}

AuditReport audit_trace_text(std::string_view text) {
  Auditor auditor;
  return auditor.run(text);
}

AuditReport audit_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    AuditReport report;
    report.violations.push_back("cannot open " + path);
    return report;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return audit_trace_text(buf.str());
}

}  // namespace dcp::sim
