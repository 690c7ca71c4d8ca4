// SPDX-License-Identifier: Apache-2.0
#include "sim/presets.hpp"

namespace dcp::sim {

namespace {

const char* kSharedSequencer = R"(# One sequencer-style rollup batching interdependent transactions.
# Proof-carrying resolution is on and sweeps are sparse, so buffered
# entries commit as soon as their dependencies gain timestamps.
[config]
node_count = 3
quorum = 2
delta = 10
tau_max = 30
buffer_max = 8
deps_max = 4
min_stake = 100
slash_fraction = 1.0
fast_path = true

[rollups]
count = 1
stakes = [500]

[delay]
model = "fixed"
value = 1

[sim]
sweep_interval = 3
seed = 7

[[event]]
tick = 0
kind = "publish"
tx = "0:0"

[[event]]
tick = 0
kind = "publish"
tx = "0:1"
deps = ["0:0"]

[[event]]
tick = 1
kind = "publish"
tx = "0:2"
deps = ["0:1"]

[[event]]
tick = 1
kind = "publish"
tx = "0:3"
deps = ["0:0", "0:1"]

[[event]]
tick = 2
kind = "publish"
tx = "0:4"
deps = ["0:5"]

[[event]]
tick = 4
kind = "publish"
tx = "0:5"
deps = ["0:4"]

[[event]]
tick = 5
kind = "publish"
tx = "0:6"
deps = ["0:7"]

[[event]]
tick = 8
kind = "publish"
tx = "0:7"

[[event]]
tick = 9
kind = "publish"
tx = "0:8"

[[event]]
tick = 9
kind = "publish"
tx = "0:9"
deps = ["0:8"]

[[event]]
tick = 10
kind = "publish"
tx = "0:10"
deps = ["0:9"]

[[event]]
tick = 12
kind = "publish"
tx = "0:11"

[[event]]
tick = 60
kind = "end"
)";

const char* kMultiRollupMesh = R"(# Four rollups with cross-rollup dependencies: a two-cycle, fan-in,
# a dependency that never arrives (times out) and a dependent that is
# rejected with it, all under uniform network delays and one node failure.
[config]
node_count = 5
quorum = 3
delta = 8
tau_max = 20
buffer_max = 6
deps_max = 12
min_stake = 100
slash_fraction = 1.0
fast_path = false

[rollups]
count = 4
stakes = [100, 100, 100, 100]

[delay]
model = "uniform"
lo = 1
hi = 4

[sim]
sweep_interval = 2
seed = 11

[[event]]
tick = 0
kind = "publish"
tx = "0:0"
deps = ["1:0"]

[[event]]
tick = 0
kind = "publish"
tx = "1:0"
deps = ["0:0"]

[[event]]
tick = 2
kind = "publish"
tx = "2:0"
deps = ["0:0", "1:0"]

[[event]]
tick = 4
kind = "publish"
tx = "3:0"
deps = ["2:0"]

[[event]]
tick = 5
kind = "publish"
tx = "1:1"
deps = ["3:9"]

[[event]]
tick = 6
kind = "publish"
tx = "0:1"

[[event]]
tick = 8
kind = "publish"
tx = "2:1"
deps = ["1:1"]

[[event]]
tick = 10
kind = "node_fail"
node = 4

[[event]]
tick = 12
kind = "publish"
tx = "3:1"

[[event]]
tick = 90
kind = "end"
)";

const char* kRogueRollup = R"(# Rollup 2 executes a transaction the pool rejected, a watcher proves it,
# and the full stake is forfeited; a later publish is refused for lack of
# collateral. A spurious claim against an honest rollup changes nothing.
[config]
node_count = 3
quorum = 2
delta = 5
tau_max = 8
buffer_max = 8
deps_max = 4
min_stake = 100
slash_fraction = 1.0
fast_path = false

[rollups]
count = 3
stakes = [200, 200, 150]

[delay]
model = "fixed"
value = 1

[sim]
sweep_interval = 1
seed = 3

[[event]]
tick = 0
kind = "publish"
tx = "0:0"

[[event]]
tick = 0
kind = "publish"
tx = "2:0"
deps = ["2:99"]

[[event]]
tick = 2
kind = "publish"
tx = "1:0"
deps = ["0:0"]

[[event]]
tick = 15
kind = "exec_claim"
rollup = 2
tx = "2:0"

[[event]]
tick = 16
kind = "watcher"
watcher = 0
accused = 2

[[event]]
tick = 18
kind = "publish"
tx = "2:1"

[[event]]
tick = 20
kind = "watcher"
watcher = 1
accused = 0
tx = "0:0"
spurious = true

[[event]]
tick = 40
kind = "end"
)";

const char* kAllHonest = R"(# Honest rollups only. Watchers file fabricated accusations against both;
# adjudication against the pool records rejects every claim and nothing
# is slashed.
[config]
node_count = 3
quorum = 2
delta = 5
tau_max = 10
buffer_max = 8
deps_max = 4
min_stake = 100
slash_fraction = 1.0
fast_path = false

[rollups]
count = 2
stakes = [100, 100]

[delay]
model = "fixed"
value = 1

[sim]
sweep_interval = 1
seed = 5

[[event]]
tick = 0
kind = "publish"
tx = "0:0"

[[event]]
tick = 1
kind = "publish"
tx = "1:0"
deps = ["0:0"]

[[event]]
tick = 6
kind = "watcher"
watcher = 0
accused = 0
tx = "0:0"
spurious = true

[[event]]
tick = 7
kind = "watcher"
watcher = 1
accused = 1
tx = "1:0"
spurious = true

[[event]]
tick = 30
kind = "end"
)";

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> kPresets = {
      {"shared-sequencer", "one rollup batching correlated transactions, fast path on",
       kSharedSequencer},
      {"multi-rollup-mesh", "cross-rollup dependency mesh with timeouts and a node failure",
       kMultiRollupMesh},
      {"rogue-rollup", "misbehaving rollup is slashed and loses publication rights",
       kRogueRollup},
      {"all-honest", "spurious watcher claims against honest rollups slash nothing",
       kAllHonest},
  };
  return kPresets;
}

const Preset* find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

}  // namespace dcp::sim
