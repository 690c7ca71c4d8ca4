// SPDX-License-Identifier: Apache-2.0
#include "dcpsim/dcpsim.h"

#include <cstring>
#include <fstream>
#include <string>

#include "sim/audit.hpp"
#include "sim/engine.hpp"
#include "sim/presets.hpp"
#include "sim/scenario.hpp"

namespace {

thread_local std::string g_last_error;

int fail(int code, std::string message) {
  g_last_error = std::move(message);
  return code;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bool write_file(const char* path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) return false;
  out << data;
  return out.good();
}

int issue_code(const dcp::sim::ScenarioIssue& issue) {
  return issue.kind == dcp::sim::ScenarioIssue::Kind::Parse ? DCPSIM_E_PARSE
                                                            : DCPSIM_E_VALIDATE;
}

}  // namespace

struct dcpsim_scenario {
  dcp::sim::Scenario scenario;
};

struct dcpsim_result {
  std::string trace_text;
  std::string metrics_json;
};

extern "C" {

const char* dcpsim_version(void) { return "0.1.0"; }

const char* dcpsim_status_name(int status) {
  switch (status) {
    case DCPSIM_OK: return "ok";
    case DCPSIM_E_ARG: return "invalid argument";
    case DCPSIM_E_PARSE: return "parse error";
    case DCPSIM_E_VALIDATE: return "validation error";
    case DCPSIM_E_IO: return "io error";
    case DCPSIM_E_AUDIT: return "audit failure";
    case DCPSIM_E_INTERNAL: return "internal error";
    default: return "unknown status";
  }
}

const char* dcpsim_last_error(void) { return g_last_error.c_str(); }

int dcpsim_scenario_load_text(const char* text, size_t len, dcpsim_scenario** out) {
  if (text == nullptr || out == nullptr) return fail(DCPSIM_E_ARG, "null argument");
  auto loaded = dcp::sim::load_scenario_text(std::string_view(text, len));
  if (!loaded.ok()) return fail(issue_code(*loaded.issue), loaded.issue->str());
  *out = new dcpsim_scenario{std::move(*loaded.scenario)};
  return DCPSIM_OK;
}

int dcpsim_scenario_load_file(const char* path, dcpsim_scenario** out) {
  if (path == nullptr || out == nullptr) return fail(DCPSIM_E_ARG, "null argument");
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) return fail(DCPSIM_E_IO, std::string("cannot open ") + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return dcpsim_scenario_load_text(text.c_str(), text.size(), out);
}

int dcpsim_scenario_set_seed(dcpsim_scenario* scenario, uint64_t seed) {
  if (scenario == nullptr) return fail(DCPSIM_E_ARG, "null scenario");
  scenario->scenario.seed = seed;
  return DCPSIM_OK;
}

void dcpsim_scenario_free(dcpsim_scenario* scenario) { delete scenario; }

int dcpsim_run(const dcpsim_scenario* scenario, dcpsim_result** out) {
  if (scenario == nullptr || out == nullptr) return fail(DCPSIM_E_ARG, "null argument");
  try {
    auto output = dcp::sim::run(scenario->scenario);
    auto* result = new dcpsim_result;
    result->trace_text = output.trace.serialize();
    result->metrics_json = output.metrics.to_json();
    *out = result;
    return DCPSIM_OK;
  } catch (const std::exception& e) {
    return fail(DCPSIM_E_INTERNAL, e.what());
  }
}

void dcpsim_result_free(dcpsim_result* result) { delete result; }

const char* dcpsim_result_trace(const dcpsim_result* result, size_t* len) {
  if (result == nullptr) return nullptr;
  if (len != nullptr) *len = result->trace_text.size();
  return result->trace_text.c_str();
}

const char* dcpsim_result_metrics_json(const dcpsim_result* result, size_t* len) {
  if (result == nullptr) return nullptr;
  if (len != nullptr) *len = result->metrics_json.size();
  return result->metrics_json.c_str();
}

int dcpsim_result_write_trace(const dcpsim_result* result, const char* path) {
  if (result == nullptr || path == nullptr) return fail(DCPSIM_E_ARG, "null argument");
  if (!write_file(path, result->trace_text)) {
    return fail(DCPSIM_E_IO, std::string("cannot write ") + path);
  }
  return DCPSIM_OK;
}

int dcpsim_result_write_metrics(const dcpsim_result* result, const char* path) {
  if (result == nullptr || path == nullptr) return fail(DCPSIM_E_ARG, "null argument");
  if (!write_file(path, result->metrics_json)) {
    return fail(DCPSIM_E_IO, std::string("cannot write ") + path);
  }
  return DCPSIM_OK;
}

int dcpsim_audit_text(const char* text, size_t len, char** report_out) {
  if (text == nullptr) return fail(DCPSIM_E_ARG, "null argument");
  const auto report = dcp::sim::audit_trace_text(std::string_view(text, len));
  if (report.ok()) return DCPSIM_OK;
  const auto listing = report.str();
  if (report_out != nullptr) *report_out = dup_string(listing);
  return fail(DCPSIM_E_AUDIT, listing);
}

int dcpsim_audit_file(const char* path, char** report_out) {
  if (path == nullptr) return fail(DCPSIM_E_ARG, "null argument");
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) return fail(DCPSIM_E_IO, std::string("cannot open ") + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return dcpsim_audit_text(text.c_str(), text.size(), report_out);
}

void dcpsim_string_free(char* text) { std::free(text); }

size_t dcpsim_preset_count(void) { return dcp::sim::presets().size(); }

const char* dcpsim_preset_name(size_t index) {
  const auto& all = dcp::sim::presets();
  return index < all.size() ? all[index].name.c_str() : nullptr;
}

const char* dcpsim_preset_summary(size_t index) {
  const auto& all = dcp::sim::presets();
  return index < all.size() ? all[index].summary.c_str() : nullptr;
}

int dcpsim_preset_text(const char* name, char** text_out) {
  if (name == nullptr || text_out == nullptr) return fail(DCPSIM_E_ARG, "null argument");
  const auto* preset = dcp::sim::find_preset(name);
  if (preset == nullptr) return fail(DCPSIM_E_ARG, std::string("unknown preset ") + name);
  *text_out = dup_string(preset->text);
  return DCPSIM_OK;
}

}  // extern "C"
