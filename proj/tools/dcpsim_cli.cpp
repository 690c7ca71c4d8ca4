// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end; talks to the engine exclusively through the
// shared-library C API.
#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "dcpsim/dcpsim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAuditFailure = 1;
constexpr int kExitUsage = 2;

int run_command(const std::string& scenario_path, const std::string& trace_path,
                const std::string& metrics_path, bool seed_set, std::uint64_t seed) {
  dcpsim_scenario* scenario = nullptr;
  if (dcpsim_scenario_load_file(scenario_path.c_str(), &scenario) != DCPSIM_OK) {
    std::fprintf(stderr, "dcpsim: %s\n", dcpsim_last_error());
    return kExitUsage;
  }
  if (seed_set) dcpsim_scenario_set_seed(scenario, seed);

  dcpsim_result* result = nullptr;
  const int rc = dcpsim_run(scenario, &result);
  dcpsim_scenario_free(scenario);
  if (rc != DCPSIM_OK) {
    std::fprintf(stderr, "dcpsim: %s\n", dcpsim_last_error());
    return kExitUsage;
  }

  int exit_code = kExitOk;
  if (!trace_path.empty()) {
    if (dcpsim_result_write_trace(result, trace_path.c_str()) != DCPSIM_OK) {
      std::fprintf(stderr, "dcpsim: %s\n", dcpsim_last_error());
      exit_code = kExitUsage;
    }
  }
  if (!metrics_path.empty()) {
    if (dcpsim_result_write_metrics(result, metrics_path.c_str()) != DCPSIM_OK) {
      std::fprintf(stderr, "dcpsim: %s\n", dcpsim_last_error());
      exit_code = kExitUsage;
    }
  } else if (exit_code == kExitOk) {
    size_t len = 0;
    const char* metrics = dcpsim_result_metrics_json(result, &len);
    std::fwrite(metrics, 1, len, stdout);
  }
  dcpsim_result_free(result);
  return exit_code;
}

int validate_command(const std::string& scenario_path) {
  dcpsim_scenario* scenario = nullptr;
  if (dcpsim_scenario_load_file(scenario_path.c_str(), &scenario) != DCPSIM_OK) {
    std::fprintf(stderr, "dcpsim: %s\n", dcpsim_last_error());
    return kExitUsage;
  }
  dcpsim_scenario_free(scenario);
  std::printf("scenario OK\n");
  return kExitOk;
}

int audit_command(const std::string& trace_path) {
  char* report = nullptr;
  const int rc = dcpsim_audit_file(trace_path.c_str(), &report);
  if (rc == DCPSIM_OK) {
    std::printf("trace OK\n");
    return kExitOk;
  }
  if (rc == DCPSIM_E_AUDIT) {
    if (report != nullptr) {
      std::fputs(report, stderr);
      dcpsim_string_free(report);
    }
    return kExitAuditFailure;
  }
  std::fprintf(stderr, "dcpsim: %s\n", dcpsim_last_error());
  return kExitUsage;
}

int presets_list_command() {
  for (size_t i = 0; i < dcpsim_preset_count(); ++i) {
    std::printf("%-18s %s\n", dcpsim_preset_name(i), dcpsim_preset_summary(i));
  }
  return kExitOk;
}

int presets_emit_command(const std::string& name, const std::string& out_path) {
  char* text = nullptr;
  if (dcpsim_preset_text(name.c_str(), &text) != DCPSIM_OK) {
    std::fprintf(stderr, "dcpsim: %s\n", dcpsim_last_error());
    return kExitUsage;
  }
  int exit_code = kExitOk;
  if (out_path.empty()) {
    std::fputs(text, stdout);
  } else {
    std::FILE* f = std::fopen(out_path.c_str(), "wb");
    if (f == nullptr) {
      std::fprintf(stderr, "dcpsim: cannot write %s\n", out_path.c_str());
      exit_code = kExitUsage;
    } else {
      std::fputs(text, f);
      std::fclose(f);
    }
  }
  dcpsim_string_free(text);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic cross-rollup atomic-commitment simulator"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::simple);

  std::string scenario_path, trace_path, metrics_path, preset_name, out_path;
  std::uint64_t seed = 0;

  auto* run_cmd = app.add_subcommand("run", "execute a scenario");
  run_cmd->add_option("--scenario", scenario_path, "scenario file")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "override the scenario seed");
  run_cmd->add_option("--trace", trace_path, "write the trace here");
  run_cmd->add_option("--metrics", metrics_path, "write metrics here (default: stdout)");

  auto* validate_cmd = app.add_subcommand("validate", "parse and validate a scenario");
  validate_cmd->add_option("--scenario", scenario_path, "scenario file")->required();

  auto* audit_cmd = app.add_subcommand("audit", "check a trace against the protocol invariants");
  audit_cmd->add_option("--trace", trace_path, "trace file")->required();

  auto* presets_cmd = app.add_subcommand("presets", "bundled scenarios");
  presets_cmd->require_subcommand(1);
  auto* list_cmd = presets_cmd->add_subcommand("list", "list preset names");
  auto* emit_cmd = presets_cmd->add_subcommand("emit", "print a preset scenario");
  emit_cmd->add_option("name", preset_name, "preset name")->required();
  emit_cmd->add_option("--out", out_path, "write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (run_cmd->parsed()) {
    return run_command(scenario_path, trace_path, metrics_path, seed_opt->count() > 0, seed);
  }
  if (validate_cmd->parsed()) return validate_command(scenario_path);
  if (audit_cmd->parsed()) return audit_command(trace_path);
  if (presets_cmd->parsed()) {
    if (list_cmd->parsed()) return presets_list_command();
    if (emit_cmd->parsed()) return presets_emit_command(preset_name, out_path);
  }
  return kExitUsage;
}
