#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "latqfi/measure.hpp"
#include "latqfi/models.hpp"

namespace latqfi {

struct Cell {
  enum class Kind { Empty, Number, Text };
  Kind kind = Kind::Empty;
  double number = 0.0;
  std::string text;

  static Cell empty() { return {}; }
  static Cell num(double v) { return {Kind::Number, v, {}}; }
  static Cell str(std::string s) { return {Kind::Text, 0.0, std::move(s)}; }
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// One run request. `method` selects the computation variant where a command
// offers several (manybody-qfi: pbc-sum | projector-obc | closed-form,
// exponent-scan: edge | manybody-pbc | manybody-obc); empty means the
// command's default. `threads` is a hint only and never affects results.
struct RunConfig {
  std::string command;
  std::string model = "ssh";
  std::string method;
  std::map<std::string, double> params; // kx, t1, t2, alpha, lambda_c, samples, reps, interval_lo, interval_hi
  std::vector<double> lambda_grid;
  std::vector<int> sizes;
  std::string output; // empty: stdout
  std::string format = "csv";
  std::uint64_t seed = 1;
  int threads = 0;
};

// Strict parse: unknown keys or wrong value types raise ConfigError.
RunConfig parse_run_config(const std::string& json_text);

// Canonical form: every field present, keys sorted, compact separators.
// parse_run_config(canonical_config_json(cfg)) reproduces cfg exactly.
std::string canonical_config_json(const RunConfig& cfg);

Table cmd_edge_qfi(const RunConfig& cfg);
Table cmd_manybody_qfi(const RunConfig& cfg);
Table cmd_exponent_scan(const RunConfig& cfg);
Table cmd_closed_forms(const RunConfig& cfg);

struct EstimateResult {
  EstimationReport report;
  Table per_run; // columns run, estimate
};

EstimateResult cmd_estimate(const RunConfig& cfg);

std::string render_csv(const Table& table);
std::string render_json(const Table& table);
std::string render_estimate_json(const EstimationReport& report);

enum class RunStatus { Ok, AllRowsFailed };

struct RunOutput {
  Table table;
  std::string rendered; // per cfg.format
  RunStatus status = RunStatus::Ok;
};

// Dispatch cfg.command, render per cfg.format. ConfigError for unknown
// commands, bad formats, or invalid command inputs; AllRowsFailed when every
// emitted row carries an error flag.
RunOutput run_command(const RunConfig& cfg);

} // namespace latqfi
