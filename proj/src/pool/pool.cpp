// SPDX-License-Identifier: Apache-2.0
#include "pool/pool.hpp"

#include <algorithm>

namespace dcp {

Pool::Pool(ProtocolConfig cfg, std::vector<Tick> clock_skews)
    : cfg_(cfg), clock_skews_(std::move(clock_skews)) {
  if (auto bad = validate(cfg_)) {
    throw Error(Errc::InvalidArgument, "invalid config: " + *bad);
  }
  if (clock_skews_.empty()) clock_skews_.assign(cfg_.node_count, 0);
  if (clock_skews_.size() != cfg_.node_count) {
    throw Error(Errc::InvalidArgument, "clock_skews length must equal node_count");
  }
}

PublishResult Pool::publish(Transaction tx, Tick now,
                            const std::function<Tick(std::uint32_t)>& delay_fn,
                            const std::function<bool(RollupId)>& stake_gate) {
  PublishResult out;
  if (records_.contains(tx.id)) {
    out.refused = PublishRefusal::DuplicateTxId;
    return out;
  }
  if (stake_gate && !stake_gate(RollupId{tx.id.rollup})) {
    out.refused = PublishRefusal::InsufficientStake;
    return out;
  }
  for (std::uint32_t node = 0; node < cfg_.node_count; ++node) {
    const Tick delay = delay_fn ? delay_fn(node) : 0;
    if (delay < 0) throw Error(Errc::InvalidArgument, "negative network delay");
    out.deliveries.push_back({node, now + delay});
  }
  PoolRecord rec;
  rec.tx = std::move(tx);
  records_.emplace(rec.tx.id, std::move(rec));
  return out;
}

std::optional<Tick> Pool::record_receipt(const TxId& txid, std::uint32_t node,
                                         Tick local_time) {
  auto it = records_.find(txid);
  if (it == records_.end()) {
    throw Error(Errc::UnknownTx, "receipt for unknown tx " + to_string(txid));
  }
  PoolRecord& rec = it->second;
  if (rec.receipts.contains(node)) {
    throw Error(Errc::DuplicateReceipt,
                "node " + std::to_string(node) + " already receipted " + to_string(txid));
  }
  rec.receipts.emplace(node, local_time);
  if (rec.tau.has_value() || rec.receipts.size() < cfg_.quorum) return std::nullopt;

  // Quorum just reached: tau is the q-th smallest receipt time, frozen now.
  std::vector<Tick> times;
  times.reserve(rec.receipts.size());
  for (const auto& [n, t] : rec.receipts) times.push_back(t);
  std::sort(times.begin(), times.end());
  rec.tau = times[cfg_.quorum - 1];
  set_status(txid, Status::Timestamped);
  return rec.tau;
}

const PoolRecord* Pool::get_record(const TxId& txid) const {
  auto it = records_.find(txid);
  return it == records_.end() ? nullptr : &it->second;
}

void Pool::set_status(const TxId& txid, Status next,
                      std::optional<RejectReason> reason) {
  auto it = records_.find(txid);
  if (it == records_.end()) {
    throw Error(Errc::UnknownTx, "status change for unknown tx " + to_string(txid));
  }
  PoolRecord& rec = it->second;
  if (is_terminal(rec.status)) {
    throw Error(Errc::AlreadyTerminal,
                to_string(txid) + " is terminal (" + name(rec.status) + ")");
  }
  if (!legal_transition(rec.status, next)) {
    throw Error(Errc::InvalidTransition,
                std::string(name(rec.status)) + " -> " + name(next) + " for " + to_string(txid));
  }
  if ((next == Status::Rejected) != reason.has_value()) {
    throw Error(Errc::InvalidArgument, "reject reason must accompany Rejected exactly");
  }
  rec.status = next;
  rec.reject_reason = reason;
}

Tick Pool::local_time(std::uint32_t node, Tick global) const {
  if (node >= clock_skews_.size()) {
    throw Error(Errc::InvalidArgument, "node index out of range");
  }
  return global + clock_skews_[node];
}

DepsLookup Pool::deps_lookup() const {
  return [this](const TxId& id) -> const std::vector<TxId>* {
    auto it = records_.find(id);
    return it == records_.end() ? nullptr : &it->second.tx.deps;
  };
}

}  // namespace dcp
