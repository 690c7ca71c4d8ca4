// SPDX-License-Identifier: Apache-2.0
#include "core/closure.hpp"

#include <algorithm>
#include <set>

namespace dcp {

ClosureResult dependency_closure(const TxId& root, const DepsLookup& known) {
  if (known(root) == nullptr) {
    throw Error(Errc::UnknownTx, "closure root not known: " + to_string(root));
  }
  std::set<TxId> members;
  std::set<TxId> missing;
  std::vector<TxId> frontier{root};
  members.insert(root);
  while (!frontier.empty()) {
    const TxId cur = frontier.back();
    frontier.pop_back();
    const auto* deps = known(cur);
    if (deps == nullptr) continue;
    for (const auto& dep : *deps) {
      if (known(dep) == nullptr) {
        missing.insert(dep);
        continue;
      }
      if (members.insert(dep).second) frontier.push_back(dep);
    }
  }
  ClosureResult out;
  out.members.assign(members.begin(), members.end());
  out.missing.assign(missing.begin(), missing.end());
  return out;
}

}  // namespace dcp
