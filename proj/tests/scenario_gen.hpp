// SPDX-License-Identifier: Apache-2.0
//
// Seeded random scenario generator for the property suites: random DAGs and
// cycles (plus deliberately unsatisfiable ghost dependencies), random delay
// models, limits and failures. Deterministic in GenOptions.
#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace gen {

struct GenOptions {
  std::uint64_t seed = 0;
  int max_txs = 64;
  bool generous_limits = false;  // nothing times out, nothing is evicted
  bool allow_failures = true;
  bool allow_forged = true;
  bool fast_path = false;
  std::optional<dcp::Tick> force_interval;
};

inline std::string generate_scenario_text(const GenOptions& opt) {
  std::mt19937_64 rng(opt.seed * 0x9E3779B97F4A7C15ull + 0x243F6A8885A308D3ull);
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };

  const int nodes = static_cast<int>(pick(1, 9));
  const int quorum = static_cast<int>(pick(nodes / 2 + 1, nodes));
  const int rollups = static_cast<int>(pick(1, 4));
  const int txs = static_cast<int>(pick(1, opt.max_txs));
  const dcp::Tick delta = pick(0, 30);
  const dcp::Tick tau_max = opt.generous_limits ? 1000000 : pick(5, 60);
  const int buffer_max = opt.generous_limits ? 4096 : static_cast<int>(pick(1, std::max(1, txs)));
  const int deps_max = opt.generous_limits ? 1000 : static_cast<int>(pick(1, 8));
  const dcp::Tick interval = opt.force_interval.value_or(pick(1, 4));

  std::ostringstream out;
  out << "[config]\n";
  out << "node_count = " << nodes << "\n";
  out << "quorum = " << quorum << "\n";
  out << "delta = " << delta << "\n";
  out << "tau_max = " << tau_max << "\n";
  out << "buffer_max = " << buffer_max << "\n";
  out << "deps_max = " << deps_max << "\n";
  out << "min_stake = 10\n";
  out << "slash_fraction = 1.0\n";
  out << "fast_path = " << (opt.fast_path ? "true" : "false") << "\n";
  if (pick(0, 2) == 0) {
    out << "clock_skews = [";
    for (int i = 0; i < nodes; ++i) out << (i ? ", " : "") << pick(-3, 3);
    out << "]\n";
  }
  out << "\n[rollups]\ncount = " << rollups << "\n";

  out << "\n[delay]\n";
  switch (pick(0, 2)) {
    case 0:
      out << "model = \"fixed\"\nvalue = " << pick(0, 5) << "\n";
      break;
    case 1: {
      const dcp::Tick lo = pick(0, 3);
      out << "model = \"uniform\"\nlo = " << lo << "\nhi = " << pick(lo, lo + 6) << "\n";
      break;
    }
    default: {
      out << "model = \"table\"\nrows = [";
      for (int r = 0; r < rollups; ++r) {
        if (r) out << ", ";
        out << "[";
        for (int c = 0; c < nodes; ++c) out << (c ? ", " : "") << pick(0, 6);
        out << "]";
      }
      out << "]\n";
      break;
    }
  }
  out << "\n[sim]\nsweep_interval = " << interval << "\nseed = " << rng() % 100000 << "\n";

  // Transactions with per-rollup sequence numbers and random publish ticks.
  struct Tx {
    dcp::TxId id;
    dcp::Tick tick;
    std::vector<dcp::TxId> deps;
    bool forged = false;
  };
  std::vector<Tx> all;
  std::vector<std::uint64_t> next_seq(rollups, 0);
  for (int i = 0; i < txs; ++i) {
    Tx tx;
    const auto r = static_cast<std::uint32_t>(pick(0, rollups - 1));
    tx.id = {r, next_seq[r]++};
    tx.tick = pick(0, 40);
    tx.forged = opt.allow_forged && pick(0, 19) == 0;
    all.push_back(tx);
  }

  // Ring groups of 2..3 members become mutual-dependency cycles.
  std::vector<int> order(all.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t cursor = 0;
  while (cursor + 1 < order.size() && pick(0, 2) == 0) {
    const std::size_t size = std::min<std::size_t>(pick(2, 3), order.size() - cursor);
    for (std::size_t k = 0; k < size; ++k) {
      const int from = order[cursor + k];
      const int to = order[cursor + (k + 1) % size];
      all[from].deps.push_back(all[to].id);
    }
    cursor += size;
  }

  // Random edges (forward and backward in publish order) plus ghosts that
  // never get published.
  std::uint64_t ghost = 0;
  for (auto& tx : all) {
    for (int tries = 0; tries < 3; ++tries) {
      if (pick(0, 3) != 0) continue;
      const auto& target = all[static_cast<std::size_t>(pick(0, txs - 1))];
      if (target.id == tx.id) continue;
      tx.deps.push_back(target.id);
    }
    if (pick(0, 9) == 0) {
      tx.deps.push_back({static_cast<std::uint32_t>(pick(0, rollups - 1)), 9000 + ghost++});
    }
  }

  std::stable_sort(all.begin(), all.end(),
                   [](const Tx& a, const Tx& b) { return a.tick < b.tick; });

  // Optional node failures, usually within the tolerated n - q budget.
  std::vector<std::pair<dcp::Tick, int>> failures;
  if (opt.allow_failures && pick(0, 2) == 0) {
    int budget = nodes - quorum;
    if (pick(0, 9) == 0) budget += 1;  // occasionally lose liveness too
    std::vector<int> node_pool(nodes);
    for (int i = 0; i < nodes; ++i) node_pool[i] = i;
    std::shuffle(node_pool.begin(), node_pool.end(), rng);
    const int count = static_cast<int>(pick(0, budget));
    for (int i = 0; i < count; ++i) failures.emplace_back(pick(0, 30), node_pool[i]);
    std::sort(failures.begin(), failures.end());
  }

  const dcp::Tick end = 60 + 3 * interval + (opt.generous_limits ? 20 : tau_max);

  std::size_t fail_cursor = 0;
  for (const auto& tx : all) {
    while (fail_cursor < failures.size() && failures[fail_cursor].first <= tx.tick) {
      out << "\n[[event]]\ntick = " << failures[fail_cursor].first
          << "\nkind = \"node_fail\"\nnode = " << failures[fail_cursor].second << "\n";
      ++fail_cursor;
    }
    out << "\n[[event]]\ntick = " << tx.tick << "\nkind = \"publish\"\ntx = \""
        << dcp::to_string(tx.id) << "\"\n";
    if (!tx.deps.empty()) {
      out << "deps = [";
      for (std::size_t i = 0; i < tx.deps.size(); ++i) {
        out << (i ? ", " : "") << '"' << dcp::to_string(tx.deps[i]) << '"';
      }
      out << "]\n";
    }
    if (tx.forged) out << "forged = true\n";
  }
  while (fail_cursor < failures.size()) {
    out << "\n[[event]]\ntick = " << failures[fail_cursor].first
        << "\nkind = \"node_fail\"\nnode = " << failures[fail_cursor].second << "\n";
    ++fail_cursor;
  }

  out << "\n[[event]]\ntick = " << end << "\nkind = \"end\"\n";
  return out.str();
}

}  // namespace gen
