// SPDX-License-Identifier: Apache-2.0
#include "core/types.hpp"

#include <charconv>

namespace dcp {

std::string to_string(const TxId& id) {
  return std::to_string(id.rollup) + ":" + std::to_string(id.seq);
}

std::optional<TxId> parse_txid(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  const auto left = text.substr(0, colon);
  const auto right = text.substr(colon + 1);
  TxId id{};
  auto r1 = std::from_chars(left.data(), left.data() + left.size(), id.rollup);
  auto r2 = std::from_chars(right.data(), right.data() + right.size(), id.seq);
  if (r1.ec != std::errc{} || r1.ptr != left.data() + left.size()) return std::nullopt;
  if (r2.ec != std::errc{} || r2.ptr != right.data() + right.size()) return std::nullopt;
  return id;
}

const char* name(Status s) {
  switch (s) {
    case Status::Pending: return "pending";
    case Status::Timestamped: return "timestamped";
    case Status::Buffered: return "buffered";
    case Status::Committed: return "committed";
    case Status::Rejected: return "rejected";
  }
  return "unknown";
}

const char* name(RejectReason r) {
  switch (r) {
    case RejectReason::TimedOut: return "timed_out";
    case RejectReason::BufferEvicted: return "buffer_evicted";
    case RejectReason::AttemptsExhausted: return "attempts_exhausted";
    case RejectReason::AuthFailed: return "auth_failed";
    case RejectReason::DependencyRejected: return "dependency_rejected";
  }
  return "unknown";
}

std::optional<Status> status_from_name(std::string_view text) {
  for (auto s : {Status::Pending, Status::Timestamped, Status::Buffered,
                 Status::Committed, Status::Rejected}) {
    if (text == name(s)) return s;
  }
  return std::nullopt;
}

std::optional<RejectReason> reject_reason_from_name(std::string_view text) {
  for (auto r : {RejectReason::TimedOut, RejectReason::BufferEvicted,
                 RejectReason::AttemptsExhausted, RejectReason::AuthFailed,
                 RejectReason::DependencyRejected}) {
    if (text == name(r)) return r;
  }
  return std::nullopt;
}

bool legal_transition(Status from, Status to) {
  switch (from) {
    case Status::Pending:
      return to == Status::Timestamped;
    case Status::Timestamped:
      return to == Status::Committed || to == Status::Buffered ||
             to == Status::Rejected;
    case Status::Buffered:
      return to == Status::Committed || to == Status::Rejected;
    case Status::Committed:
    case Status::Rejected:
      return false;
  }
  return false;
}

std::uint64_t Rational::floor_mul(std::uint64_t value) const {
  if (den == 0) throw Error(Errc::InvalidArgument, "rational with zero denominator");
  const unsigned __int128 wide = static_cast<unsigned __int128>(value) * num;
  return static_cast<std::uint64_t>(wide / den);
}

std::optional<std::string> validate(const ProtocolConfig& cfg) {
  if (cfg.node_count < 1) return "node_count >= 1";
  if (cfg.quorum > cfg.node_count) return "quorum <= node_count";
  // Majority: q > n/2, evaluated without integer-division slack.
  if (2ull * cfg.quorum <= cfg.node_count) return "quorum > node_count / 2";
  if (cfg.delta < 0) return "delta >= 0";
  if (cfg.tau_max <= 0) return "tau_max > 0";
  if (cfg.buffer_max < 1) return "buffer_max >= 1";
  if (cfg.deps_max < 1) return "deps_max >= 1";
  if (cfg.slash_fraction.den == 0) return "slash_fraction denominator > 0";
  if (cfg.slash_fraction.num > cfg.slash_fraction.den) return "slash_fraction <= 1";
  return std::nullopt;
}

}  // namespace dcp
