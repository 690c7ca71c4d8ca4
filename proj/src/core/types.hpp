// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dcp {

/// Simulated time in integer ticks.
using Tick = std::int64_t;

using Digest32 = std::array<std::uint8_t, 32>;

struct RollupId {
  std::uint32_t value = 0;
  auto operator<=>(const RollupId&) const = default;
};

/// Globally unique transaction identifier: the seq-th transaction
/// originated by a rollup.
struct TxId {
  std::uint32_t rollup = 0;
  std::uint64_t seq = 0;
  auto operator<=>(const TxId&) const = default;
};

std::string to_string(const TxId& id);                    // "rollup:seq"
std::optional<TxId> parse_txid(std::string_view text);

enum class Status : std::uint8_t {
  Pending = 0,
  Timestamped = 1,
  Buffered = 2,
  Committed = 3,
  Rejected = 4,
};

enum class RejectReason : std::uint8_t {
  TimedOut = 0,
  BufferEvicted = 1,
  AttemptsExhausted = 2,
  AuthFailed = 3,
  DependencyRejected = 4,
};

inline constexpr std::size_t kRejectReasonCount = 5;

const char* name(Status s);
const char* name(RejectReason r);
std::optional<Status> status_from_name(std::string_view);
std::optional<RejectReason> reject_reason_from_name(std::string_view);

inline bool is_terminal(Status s) {
  return s == Status::Committed || s == Status::Rejected;
}

/// Legal lifecycle moves: Pending -> Timestamped -> {Committed, Buffered,
/// Rejected}; Buffered -> {Committed, Rejected}. Terminal states are final.
bool legal_transition(Status from, Status to);

struct AuthToken {
  std::uint64_t key_id = 0;
  Digest32 tag{};
  bool operator==(const AuthToken&) const = default;
};

struct Transaction {
  TxId id;
  std::vector<TxId> deps;   // sorted, unique, never contains id
  Digest32 payload_digest{};
  AuthToken auth;
  Tick submit_time = 0;
};

/// Exact fraction in [0, 1]; kept rational so slash arithmetic stays
/// integer-exact and portable.
struct Rational {
  std::uint64_t num = 1;
  std::uint64_t den = 1;

  /// floor(value * num / den), computed without overflow.
  std::uint64_t floor_mul(std::uint64_t value) const;
  bool operator==(const Rational&) const = default;
};

struct ProtocolConfig {
  std::uint32_t node_count = 1;   // pool size n
  std::uint32_t quorum = 1;       // q, must satisfy n/2 < q <= n
  Tick delta = 0;                 // pairwise timestamp compatibility bound
  Tick tau_max = 1;               // max buffer residency measured from tau
  std::uint32_t buffer_max = 1;   // buffer capacity
  std::uint32_t deps_max = 1;     // max failed resolution attempts
  std::uint64_t min_stake = 0;    // publish gate
  Rational slash_fraction{1, 1};  // forfeited share per verified misbehavior
  bool fast_path = false;         // proof-carrying early resolution
};

/// Returns the name of the violated invariant, or nullopt when valid.
std::optional<std::string> validate(const ProtocolConfig& cfg);

enum class Errc {
  DuplicateTxId,
  UnknownTx,
  DuplicateReceipt,
  AlreadyTerminal,
  InvalidTransition,
  IncompleteGroup,
  InvalidArgument,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace dcp
