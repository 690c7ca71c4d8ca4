// SPDX-License-Identifier: Apache-2.0
#include "sim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "core/digest.hpp"

namespace dcp::sim {

namespace {

struct RawValue {
  enum class Kind { Bool, Int, Decimal, String, Array };
  Kind kind = Kind::Int;
  bool boolean = false;
  bool negative = false;
  std::uint64_t magnitude = 0;       // Int
  std::uint64_t dec_num = 0;         // Decimal as dec_num / dec_den
  std::uint64_t dec_den = 1;
  std::string text;                  // String
  std::vector<RawValue> items;       // Array
};

struct Entry {
  std::size_t line = 0;
  RawValue value;
};

using Table = std::map<std::string, Entry>;

struct ParsedDoc {
  std::map<std::string, Table> sections;          // [name]
  std::vector<std::pair<std::size_t, Table>> events;  // [[event]], with line
};

struct ParseFail {
  std::size_t line;
  std::string field;
  std::string message;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Parses one value starting at pos; advances pos past it.
std::optional<RawValue> parse_value(std::string_view s, std::size_t& pos) {
  auto skip_ws = [&] {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  };
  skip_ws();
  if (pos >= s.size()) return std::nullopt;
  RawValue v;
  if (s[pos] == '"') {
    const auto end = s.find('"', pos + 1);
    if (end == std::string_view::npos) return std::nullopt;
    v.kind = RawValue::Kind::String;
    v.text = std::string(s.substr(pos + 1, end - pos - 1));
    pos = end + 1;
    return v;
  }
  if (s[pos] == '[') {
    ++pos;
    v.kind = RawValue::Kind::Array;
    skip_ws();
    if (pos < s.size() && s[pos] == ']') {
      ++pos;
      return v;
    }
    while (true) {
      auto item = parse_value(s, pos);
      if (!item.has_value()) return std::nullopt;
      v.items.push_back(std::move(*item));
      skip_ws();
      if (pos >= s.size()) return std::nullopt;
      if (s[pos] == ',') {
        ++pos;
        continue;
      }
      if (s[pos] == ']') {
        ++pos;
        return v;
      }
      return std::nullopt;
    }
  }
  if (s.compare(pos, 4, "true") == 0) {
    v.kind = RawValue::Kind::Bool;
    v.boolean = true;
    pos += 4;
    return v;
  }
  if (s.compare(pos, 5, "false") == 0) {
    v.kind = RawValue::Kind::Bool;
    v.boolean = false;
    pos += 5;
    return v;
  }
  // Number: [-]digits[.digits]
  bool neg = false;
  std::size_t p = pos;
  if (s[p] == '-') {
    neg = true;
    ++p;
  }
  const std::size_t digits_start = p;
  while (p < s.size() && s[p] >= '0' && s[p] <= '9') ++p;
  if (p == digits_start) return std::nullopt;
  std::uint64_t whole = 0;
  auto res = std::from_chars(s.data() + digits_start, s.data() + p, whole);
  if (res.ec != std::errc{}) return std::nullopt;
  if (p < s.size() && s[p] == '.') {
    ++p;
    const std::size_t frac_start = p;
    while (p < s.size() && s[p] >= '0' && s[p] <= '9') ++p;
    if (p == frac_start || p - frac_start > 9 || neg) return std::nullopt;
    std::uint64_t frac = 0;
    std::from_chars(s.data() + frac_start, s.data() + p, frac);
    std::uint64_t den = 1;
    for (std::size_t i = frac_start; i < p; ++i) den *= 10;
    v.kind = RawValue::Kind::Decimal;
    v.dec_num = whole * den + frac;
    v.dec_den = den;
    pos = p;
    return v;
  }
  v.kind = RawValue::Kind::Int;
  v.negative = neg && whole != 0;
  v.magnitude = whole;
  pos = p;
  return v;
}

std::optional<ParseFail> parse_document(std::string_view text, ParsedDoc& doc) {
  std::size_t line_no = 0;
  std::string current_section;
  Table* current = nullptr;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.starts_with("[[") && line.ends_with("]]")) {
      const auto name = trim(line.substr(2, line.size() - 4));
      if (name != "event") {
        return ParseFail{line_no, std::string(name), "unknown table array (expected [[event]])"};
      }
      doc.events.emplace_back(line_no, Table{});
      current = &doc.events.back().second;
      current_section = "event";
      continue;
    }
    if (line.starts_with('[') && line.ends_with(']')) {
      const auto name = std::string(trim(line.substr(1, line.size() - 2)));
      if (name != "config" && name != "rollups" && name != "delay" && name != "sim") {
        return ParseFail{line_no, name, "unknown section"};
      }
      current = &doc.sections[name];
      current_section = name;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      return ParseFail{line_no, "", "expected 'key = value'"};
    }
    if (current == nullptr) {
      return ParseFail{line_no, "", "key outside any section"};
    }
    const auto key = std::string(trim(line.substr(0, eq)));
    if (key.empty()) return ParseFail{line_no, "", "empty key"};
    const auto value_text = line.substr(eq + 1);
    std::size_t pos = 0;
    auto value = parse_value(value_text, pos);
    if (value.has_value()) {
      while (pos < value_text.size() && (value_text[pos] == ' ' || value_text[pos] == '\t')) ++pos;
      if (pos != value_text.size()) value.reset();
    }
    if (!value.has_value()) {
      return ParseFail{line_no, current_section + "." + key, "malformed value"};
    }
    if (current->contains(key)) {
      return ParseFail{line_no, current_section + "." + key, "duplicate key"};
    }
    (*current)[key] = Entry{line_no, std::move(*value)};
  }
  return std::nullopt;
}

// Typed extraction; every mismatch is a parse-level issue.
struct Extractor {
  const Table& table;
  std::string scope;
  std::optional<ParseFail> fail;
  std::set<std::string> consumed;

  const RawValue* get(const std::string& key) {
    auto it = table.find(key);
    if (it == table.end()) return nullptr;
    consumed.insert(key);
    return &it->second.value;
  }

  std::size_t line_of(const std::string& key) const {
    auto it = table.find(key);
    return it == table.end() ? 0 : it->second.line;
  }

  void type_error(const std::string& key, const std::string& want) {
    if (!fail.has_value()) fail = ParseFail{line_of(key), scope + "." + key, "expected " + want};
  }

  void missing(const std::string& key) {
    if (!fail.has_value()) fail = ParseFail{0, scope + "." + key, "missing required key"};
  }

  std::optional<std::uint64_t> u64(const std::string& key) {
    const auto* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (v->kind != RawValue::Kind::Int || v->negative) {
      type_error(key, "non-negative integer");
      return std::nullopt;
    }
    return v->magnitude;
  }

  std::optional<Tick> tick(const std::string& key) {
    const auto* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (v->kind != RawValue::Kind::Int ||
        v->magnitude > static_cast<std::uint64_t>(std::numeric_limits<Tick>::max())) {
      type_error(key, "integer");
      return std::nullopt;
    }
    const auto mag = static_cast<Tick>(v->magnitude);
    return v->negative ? -mag : mag;
  }

  std::optional<bool> boolean(const std::string& key) {
    const auto* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (v->kind != RawValue::Kind::Bool) {
      type_error(key, "true or false");
      return std::nullopt;
    }
    return v->boolean;
  }

  std::optional<std::string> str(const std::string& key) {
    const auto* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (v->kind != RawValue::Kind::String) {
      type_error(key, "string");
      return std::nullopt;
    }
    return v->text;
  }

  std::optional<Rational> fraction(const std::string& key) {
    const auto* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (v->kind == RawValue::Kind::Int && !v->negative) return Rational{v->magnitude, 1};
    if (v->kind == RawValue::Kind::Decimal) return Rational{v->dec_num, v->dec_den};
    type_error(key, "decimal in [0, 1]");
    return std::nullopt;
  }

  std::optional<std::vector<Tick>> tick_array(const std::string& key) {
    const auto* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (v->kind != RawValue::Kind::Array) {
      type_error(key, "array of integers");
      return std::nullopt;
    }
    std::vector<Tick> out;
    for (const auto& item : v->items) {
      if (item.kind != RawValue::Kind::Int) {
        type_error(key, "array of integers");
        return std::nullopt;
      }
      const auto mag = static_cast<Tick>(item.magnitude);
      out.push_back(item.negative ? -mag : mag);
    }
    return out;
  }

  std::optional<std::vector<std::uint64_t>> u64_array(const std::string& key) {
    const auto* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (v->kind != RawValue::Kind::Array) {
      type_error(key, "array of non-negative integers");
      return std::nullopt;
    }
    std::vector<std::uint64_t> out;
    for (const auto& item : v->items) {
      if (item.kind != RawValue::Kind::Int || item.negative) {
        type_error(key, "array of non-negative integers");
        return std::nullopt;
      }
      out.push_back(item.magnitude);
    }
    return out;
  }

  std::optional<std::vector<std::vector<Tick>>> tick_matrix(const std::string& key) {
    const auto* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (v->kind != RawValue::Kind::Array) {
      type_error(key, "array of integer arrays");
      return std::nullopt;
    }
    std::vector<std::vector<Tick>> out;
    for (const auto& row : v->items) {
      if (row.kind != RawValue::Kind::Array) {
        type_error(key, "array of integer arrays");
        return std::nullopt;
      }
      std::vector<Tick> cells;
      for (const auto& cell : row.items) {
        if (cell.kind != RawValue::Kind::Int) {
          type_error(key, "array of integer arrays");
          return std::nullopt;
        }
        const auto mag = static_cast<Tick>(cell.magnitude);
        cells.push_back(cell.negative ? -mag : mag);
      }
      out.push_back(std::move(cells));
    }
    return out;
  }

  std::optional<std::vector<TxId>> txid_array(const std::string& key) {
    const auto* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (v->kind != RawValue::Kind::Array) {
      type_error(key, "array of \"rollup:seq\" strings");
      return std::nullopt;
    }
    std::vector<TxId> out;
    for (const auto& item : v->items) {
      if (item.kind != RawValue::Kind::String) {
        type_error(key, "array of \"rollup:seq\" strings");
        return std::nullopt;
      }
      const auto id = parse_txid(item.text);
      if (!id.has_value()) {
        type_error(key, "array of \"rollup:seq\" strings");
        return std::nullopt;
      }
      out.push_back(*id);
    }
    return out;
  }

  std::optional<TxId> txid(const std::string& key) {
    const auto s = str(key);
    if (!s.has_value()) return std::nullopt;
    const auto id = parse_txid(*s);
    if (!id.has_value()) {
      type_error(key, "\"rollup:seq\"");
      return std::nullopt;
    }
    return id;
  }

  // Unknown keys are parse errors: they are always a typo or a version skew.
  std::optional<ParseFail> leftover() const {
    for (const auto& [key, entry] : table) {
      if (!consumed.contains(key)) {
        return ParseFail{entry.line, scope + "." + key, "unknown key"};
      }
    }
    return std::nullopt;
  }
};

ScenarioIssue parse_issue(const ParseFail& f) {
  return {ScenarioIssue::Kind::Parse, f.line, f.field, f.message};
}

ScenarioIssue validation_issue(std::string field, std::string message) {
  return {ScenarioIssue::Kind::Validation, 0, std::move(field), std::move(message)};
}

}  // namespace

Tick event_tick(const ScenarioEvent& ev) {
  return std::visit([](const auto& e) { return e.tick; }, ev);
}

std::string ScenarioIssue::str() const {
  std::string out = kind == Kind::Parse ? "parse error" : "validation error";
  if (line != 0) out += " at line " + std::to_string(line);
  if (!field.empty()) out += " (" + field + ")";
  out += ": " + message;
  return out;
}

LoadResult load_scenario_text(std::string_view text) {
  ParsedDoc doc;
  if (auto fail = parse_document(text, doc)) {
    return {std::nullopt, parse_issue(*fail)};
  }

  Scenario s;

  {
    Extractor ex{doc.sections["config"], "config", {}, {}};
    if (auto v = ex.u64("node_count")) s.config.node_count = static_cast<std::uint32_t>(*v);
    if (auto v = ex.u64("quorum")) s.config.quorum = static_cast<std::uint32_t>(*v);
    if (auto v = ex.tick("delta")) s.config.delta = *v;
    if (auto v = ex.tick("tau_max")) s.config.tau_max = *v;
    if (auto v = ex.u64("buffer_max")) s.config.buffer_max = static_cast<std::uint32_t>(*v);
    if (auto v = ex.u64("deps_max")) s.config.deps_max = static_cast<std::uint32_t>(*v);
    if (auto v = ex.u64("min_stake")) s.config.min_stake = *v;
    if (auto v = ex.fraction("slash_fraction")) s.config.slash_fraction = *v;
    if (auto v = ex.boolean("fast_path")) s.config.fast_path = *v;
    if (auto v = ex.tick_array("clock_skews")) s.clock_skews = *v;
    if (ex.fail) return {std::nullopt, parse_issue(*ex.fail)};
    if (auto left = ex.leftover()) return {std::nullopt, parse_issue(*left)};
  }
  {
    Extractor ex{doc.sections["rollups"], "rollups", {}, {}};
    if (auto v = ex.u64("count")) s.rollup_count = static_cast<std::uint32_t>(*v);
    if (auto v = ex.u64_array("stakes")) s.initial_stakes = *v;
    if (ex.fail) return {std::nullopt, parse_issue(*ex.fail)};
    if (auto left = ex.leftover()) return {std::nullopt, parse_issue(*left)};
  }
  {
    Extractor ex{doc.sections["delay"], "delay", {}, {}};
    const auto model = ex.str("model").value_or("fixed");
    if (model == "fixed") {
      s.delay.kind = DelayModel::Kind::Fixed;
      if (auto v = ex.tick("value")) s.delay.fixed = *v;
    } else if (model == "uniform") {
      s.delay.kind = DelayModel::Kind::Uniform;
      if (auto v = ex.tick("lo")) s.delay.lo = *v; else ex.missing("lo");
      if (auto v = ex.tick("hi")) s.delay.hi = *v; else ex.missing("hi");
    } else if (model == "table") {
      s.delay.kind = DelayModel::Kind::Table;
      if (auto v = ex.tick_matrix("rows")) s.delay.table = *v; else ex.missing("rows");
    } else {
      ex.fail = ParseFail{ex.line_of("model"), "delay.model", "expected fixed, uniform or table"};
    }
    if (ex.fail) return {std::nullopt, parse_issue(*ex.fail)};
    if (auto left = ex.leftover()) return {std::nullopt, parse_issue(*left)};
  }
  {
    Extractor ex{doc.sections["sim"], "sim", {}, {}};
    if (auto v = ex.tick("sweep_interval")) s.sweep_interval = *v;
    if (auto v = ex.u64("seed")) s.seed = *v;
    if (ex.fail) return {std::nullopt, parse_issue(*ex.fail)};
    if (auto left = ex.leftover()) return {std::nullopt, parse_issue(*left)};
  }

  for (auto& [line, table] : doc.events) {
    Extractor ex{table, "event", {}, {}};
    const auto kind = ex.str("kind");
    const auto tick = ex.tick("tick");
    if (!kind.has_value()) ex.missing("kind");
    if (!tick.has_value()) ex.missing("tick");
    if (!ex.fail.has_value() && kind.has_value() && tick.has_value()) {
      if (*kind == "publish") {
        PublishEvent ev;
        ev.tick = *tick;
        if (auto v = ex.txid("tx")) ev.tx = *v; else ex.missing("tx");
        if (auto v = ex.txid_array("deps")) ev.deps = *v;
        if (auto v = ex.boolean("forged")) ev.forged = *v;
        if (auto v = ex.u64("key_id")) ev.key_id = *v;
        if (auto v = ex.str("payload")) {
          auto digest = digest_from_hex(*v);
          if (!digest.has_value()) {
            ex.fail = ParseFail{line, "event.payload", "expected 64 hex chars"};
          } else {
            ev.payload = *digest;
          }
        }
        std::sort(ev.deps.begin(), ev.deps.end());
        ev.deps.erase(std::unique(ev.deps.begin(), ev.deps.end()), ev.deps.end());
        s.events.emplace_back(std::move(ev));
      } else if (*kind == "node_fail") {
        NodeFailEvent ev;
        ev.tick = *tick;
        if (auto v = ex.u64("node")) ev.node = static_cast<std::uint32_t>(*v); else ex.missing("node");
        s.events.emplace_back(ev);
      } else if (*kind == "exec_claim") {
        ExecClaimEvent ev;
        ev.tick = *tick;
        if (auto v = ex.u64("rollup")) ev.rollup = RollupId{static_cast<std::uint32_t>(*v)};
        else ex.missing("rollup");
        if (auto v = ex.txid("tx")) ev.tx = *v; else ex.missing("tx");
        s.events.emplace_back(ev);
      } else if (*kind == "watcher") {
        WatcherEvent ev;
        ev.tick = *tick;
        if (auto v = ex.u64("watcher")) ev.watcher = *v; else ex.missing("watcher");
        if (auto v = ex.u64("accused")) ev.accused = RollupId{static_cast<std::uint32_t>(*v)};
        else ex.missing("accused");
        if (auto v = ex.txid("tx")) ev.tx = *v;
        if (auto v = ex.boolean("spurious")) ev.spurious = *v;
        s.events.emplace_back(ev);
      } else if (*kind == "end") {
        s.events.emplace_back(EndEvent{*tick});
      } else {
        ex.fail = ParseFail{line, "event.kind",
                            "expected publish, node_fail, exec_claim, watcher or end"};
      }
    }
    if (ex.fail) return {std::nullopt, parse_issue(*ex.fail)};
    if (auto left = ex.leftover()) return {std::nullopt, parse_issue(*left)};
  }

  if (s.initial_stakes.empty()) {
    s.initial_stakes.assign(s.rollup_count, s.config.min_stake);
  }
  if (s.clock_skews.empty()) {
    s.clock_skews.assign(s.config.node_count, 0);
  }
  for (const auto& ev : s.events) {
    if (const auto* end = std::get_if<EndEvent>(&ev)) s.end_tick = end->tick;
  }

  if (auto issue = validate_scenario(s)) {
    return {std::nullopt, *issue};
  }
  return {std::move(s), std::nullopt};
}

std::optional<ScenarioIssue> validate_scenario(const Scenario& s) {
  if (auto bad = validate(s.config)) {
    return validation_issue("config", *bad);
  }
  if (s.rollup_count < 1) {
    return validation_issue("rollups.count", "rollup count >= 1");
  }
  if (s.initial_stakes.size() != s.rollup_count) {
    return validation_issue("rollups.stakes", "stakes length must equal rollup count");
  }
  if (s.clock_skews.size() != s.config.node_count) {
    return validation_issue("config.clock_skews", "clock_skews length must equal node_count");
  }
  switch (s.delay.kind) {
    case DelayModel::Kind::Fixed:
      if (s.delay.fixed < 0) return validation_issue("delay.value", "delay >= 0");
      break;
    case DelayModel::Kind::Uniform:
      if (s.delay.lo < 0 || s.delay.hi < s.delay.lo) {
        return validation_issue("delay.lo", "0 <= lo <= hi");
      }
      break;
    case DelayModel::Kind::Table: {
      if (s.delay.table.size() != s.rollup_count) {
        return validation_issue("delay.rows", "one row per rollup");
      }
      for (const auto& row : s.delay.table) {
        if (row.size() != s.config.node_count) {
          return validation_issue("delay.rows", "one column per node");
        }
        for (const auto cell : row) {
          if (cell < 0) return validation_issue("delay.rows", "delays >= 0");
        }
      }
      break;
    }
  }
  if (s.sweep_interval < 1) {
    return validation_issue("sim.sweep_interval", "sweep_interval >= 1");
  }
  if (s.events.empty()) {
    return validation_issue("event", "at least the end event is required");
  }

  Tick prev = std::numeric_limits<Tick>::min();
  std::size_t end_count = 0;
  std::set<TxId> published;
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const auto& ev = s.events[i];
    const Tick t = event_tick(ev);
    if (t < 0) return validation_issue("event.tick", "ticks >= 0");
    if (t < prev) return validation_issue("event.tick", "events sorted by tick");
    prev = t;

    if (const auto* pub = std::get_if<PublishEvent>(&ev)) {
      if (pub->tx.rollup >= s.rollup_count) {
        return validation_issue("event.tx", "publisher rollup out of range: " + to_string(pub->tx));
      }
      for (const auto& dep : pub->deps) {
        if (dep == pub->tx) {
          return validation_issue("event.deps", "self-dependency: " + to_string(pub->tx));
        }
      }
      if (!published.insert(pub->tx).second) {
        return validation_issue("event.tx", "duplicate TxId: " + to_string(pub->tx));
      }
    } else if (const auto* fail = std::get_if<NodeFailEvent>(&ev)) {
      if (fail->node >= s.config.node_count) {
        return validation_issue("event.node", "node index out of range");
      }
    } else if (const auto* claim = std::get_if<ExecClaimEvent>(&ev)) {
      if (claim->rollup.value >= s.rollup_count) {
        return validation_issue("event.rollup", "rollup out of range");
      }
    } else if (const auto* watch = std::get_if<WatcherEvent>(&ev)) {
      if (watch->accused.value >= s.rollup_count) {
        return validation_issue("event.accused", "rollup out of range");
      }
      if (watch->spurious && !watch->tx.has_value()) {
        return validation_issue("event.tx", "spurious watcher events require a target tx");
      }
    } else if (std::get_if<EndEvent>(&ev)) {
      ++end_count;
      if (i + 1 != s.events.size()) {
        return validation_issue("event", "end must be the last event");
      }
    }
  }
  if (end_count != 1) {
    return validation_issue("event", "exactly one end event is required");
  }
  return std::nullopt;
}

LoadResult load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    return {std::nullopt,
            ScenarioIssue{ScenarioIssue::Kind::Parse, 0, "file", "cannot open " + path}};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario_text(buf.str());
}

}  // namespace dcp::sim
