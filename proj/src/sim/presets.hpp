// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dcp::sim {

struct Preset {
  std::string name;
  std::string summary;
  std::string text;  // scenario source, loadable by load_scenario_text
};

const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

}  // namespace dcp::sim
