// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dcp::sim {

struct AuditReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const;
};

/// Offline invariant checker over a serialized trace. Recomputes quorum
/// timestamps, dependency closures (its own transitive-closure pass),
/// closure atomicity, the delta rule, buffer limits, attempt budgets,
/// notification bijection and stake conservation from raw events alone.
AuditReport audit_trace_text(std::string_view text);
AuditReport audit_trace_file(const std::string& path);

}  // namespace dcp::sim
