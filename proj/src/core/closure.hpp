// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "core/types.hpp"

namespace dcp {

/// Accessor for the dependency edges of a known transaction. Returns
/// nullptr when the id is unknown (unpublished).
using DepsLookup = std::function<const std::vector<TxId>*(const TxId&)>;

struct ClosureResult {
  std::vector<TxId> members;  // sorted; always contains the root
  std::vector<TxId> missing;  // sorted; referenced deps with no known record
};

/// Transitive dependency set reachable from root over known records.
/// Missing deps are reported as data, never as an error; cycles are fine.
ClosureResult dependency_closure(const TxId& root, const DepsLookup& known);

}  // namespace dcp
