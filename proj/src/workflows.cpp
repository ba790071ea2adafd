#include "latqfi/workflows.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "json.hpp"

#include "latqfi/edge.hpp"
#include "latqfi/errors.hpp"
#include "latqfi/many_body.hpp"
#include "latqfi/scaling.hpp"

namespace latqfi {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { raise(ErrorCode::ConfigError, what); }

bool known_param(const std::string& key) {
  static const char* names[] = {"kx",   "t1",   "t2",          "alpha",      "lambda_c",
                                "samples", "reps", "interval_lo", "interval_hi"};
  for (const char* name : names)
    if (key == name) return true;
  return false;
}

double param_or(const RunConfig& cfg, const char* name, double fallback) {
  auto it = cfg.params.find(name);
  return it == cfg.params.end() ? fallback : it->second;
}

ModelFamily family_from_config(const RunConfig& cfg) {
  ModelFamily family;
  try {
    family = family_from_id(cfg.model);
  } catch (const Error&) {
    config_error("unknown model: " + cfg.model);
  }
  family.kx = param_or(cfg, "kx", family.kx);
  family.t1 = param_or(cfg, "t1", family.t1);
  family.t2 = param_or(cfg, "t2", family.t2);
  family.alpha = param_or(cfg, "alpha", family.alpha);
  family.lambda_c = param_or(cfg, "lambda_c", family.lambda_c);
  return family;
}

void require_grids(const RunConfig& cfg, const char* command) {
  if (cfg.lambda_grid.empty()) config_error(std::string(command) + " needs a lambda grid");
  if (cfg.sizes.empty()) config_error(std::string(command) + " needs at least one size");
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

} // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) config_error("config must be a JSON object");

  static const char* known_keys[] = {"command", "format", "lambda_grid", "method", "model",
                                     "output",  "params", "seed",        "sizes",  "threads"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : known_keys) known = known || it.key() == key;
    if (!known) config_error("unknown config key: " + it.key());
  }

  RunConfig cfg;
  auto read_string = [&](const char* key, std::string& dst) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_string()) config_error(std::string(key) + " must be a string");
    dst = v.get<std::string>();
  };
  read_string("command", cfg.command);
  read_string("model", cfg.model);
  read_string("method", cfg.method);
  read_string("format", cfg.format);
  read_string("output", cfg.output);

  if (j.contains("seed")) {
    const json& v = j.at("seed");
    if (!v.is_number_unsigned()) config_error("seed must be a nonnegative integer");
    cfg.seed = v.get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    const json& v = j.at("threads");
    if (!v.is_number_integer() || v.get<long long>() < 0)
      config_error("threads must be a nonnegative integer");
    cfg.threads = static_cast<int>(v.get<long long>());
  }
  if (j.contains("lambda_grid")) {
    const json& v = j.at("lambda_grid");
    if (!v.is_array()) config_error("lambda_grid must be an array of numbers");
    for (const json& x : v) {
      if (!x.is_number()) config_error("lambda_grid must be an array of numbers");
      cfg.lambda_grid.push_back(x.get<double>());
    }
  }
  if (j.contains("sizes")) {
    const json& v = j.at("sizes");
    if (!v.is_array()) config_error("sizes must be an array of integers");
    for (const json& x : v) {
      if (!x.is_number_integer()) config_error("sizes must be an array of integers");
      const long long L = x.get<long long>();
      if (L < 1 || L > 1000000000LL) config_error("sizes must be positive");
      cfg.sizes.push_back(static_cast<int>(L));
    }
  }
  if (j.contains("params")) {
    const json& v = j.at("params");
    if (!v.is_object()) config_error("params must be an object of named reals");
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!known_param(it.key())) config_error("unknown param: " + it.key());
      if (!it.value().is_number()) config_error("param " + it.key() + " must be a number");
      cfg.params[it.key()] = it.value().get<double>();
    }
  }
  return cfg;
}

std::string canonical_config_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["format"] = cfg.format;
  j["lambda_grid"] = cfg.lambda_grid;
  j["method"] = cfg.method;
  j["model"] = cfg.model;
  j["output"] = cfg.output;
  j["params"] = json::object();
  for (const auto& [key, value] : cfg.params) j["params"][key] = value;
  j["seed"] = cfg.seed;
  j["sizes"] = cfg.sizes;
  j["threads"] = cfg.threads;
  return j.dump();
}

Table cmd_edge_qfi(const RunConfig& cfg) {
  if (cfg.model != "ssh" && cfg.model != "chern-wire")
    config_error("edge-qfi supports models ssh and chern-wire");
  require_grids(cfg, "edge-qfi");
  const ModelFamily family = family_from_config(cfg);

  Table table;
  table.columns = {"lambda", "L", "F_closed_form", "F_numeric", "cfi_position", "flags"};
  for (double lambda : cfg.lambda_grid) {
    for (int L : cfg.sizes) {
      std::vector<Cell> row(6, Cell::empty());
      row[0] = Cell::num(lambda);
      row[1] = Cell::num(L);
      row[5] = Cell::str("");
      try {
        StateDerivative sd;
        if (family.kind == ModelFamily::Kind::SSH) {
          if (lambda < 1.0) {
            row[2] = Cell::num(qfi(ssh_edge_family(lambda, L)));
            auto state_at = [&](double lam) {
              return extract_edge_state(assemble_dense(build_ssh(lam, L, family.decouple_last_b)),
                                        2)
                  .first;
            };
            sd = numerical_state_derivative(state_at, lambda, default_fd_step(lambda));
          } else {
            auto state_at = [&](double lam) {
              return extract_bulk_state(assemble_dense(build_ssh(lam, L, family.decouple_last_b)));
            };
            sd = numerical_state_derivative(state_at, lambda, default_fd_step(lambda));
          }
        } else {
          // No closed-form column for the wire; the exact ansatz still serves
          // as the state pipeline where it applies.
          if (chern_wire_ansatz_valid(family.kx, lambda, family.t1, family.t2)) {
            sd = materialize_with_derivative(
                chern_wire_edge_family(family.kx, lambda, family.t1, family.t2, L));
          } else {
            auto state_at = [&](double lam) {
              return extract_edge_state(
                         assemble_dense(build_chern_wire(family.kx, lam, family.t1, family.t2, L)),
                         2)
                  .first;
            };
            sd = numerical_state_derivative(state_at, lambda, default_fd_step(lambda));
          }
        }
        row[3] = Cell::num(qfi_pure(sd));
        row[4] = Cell::num(cfi(position_probabilities(sd, 2)));
      } catch (const Error& err) {
        row[5] = Cell::str(error_code_name(err.code()));
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

Table cmd_manybody_qfi(const RunConfig& cfg) {
  if (cfg.model != "ssh" && cfg.model != "chern-bloch")
    config_error("manybody-qfi supports models ssh and chern-bloch");
  const std::string method = cfg.method.empty() ? "pbc-sum" : cfg.method;
  if (method != "pbc-sum" && method != "projector-obc" && method != "closed-form")
    config_error("method must be pbc-sum, projector-obc or closed-form");
  require_grids(cfg, "manybody-qfi");
  const ModelFamily family = family_from_config(cfg);
  const bool ssh = family.kind == ModelFamily::Kind::SSH;

  if (method == "closed-form") {
    const double critical = ssh ? 1.0 : -4.0;
    for (double lambda : cfg.lambda_grid)
      if (std::abs(lambda - critical) > 1e-12)
        config_error("closed-form is defined at the critical coupling only");
  }

  Table table;
  table.columns = {"lambda", "L", "F", "method", "flags"};
  for (double lambda : cfg.lambda_grid) {
    for (int L : cfg.sizes) {
      std::vector<Cell> row(5, Cell::empty());
      row[0] = Cell::num(lambda);
      row[1] = Cell::num(L);
      row[3] = Cell::str(method);
      row[4] = Cell::str("");
      try {
        double f = 0.0;
        if (method == "pbc-sum")
          f = qfi_pbc_sum(family, lambda, L).value;
        else if (method == "projector-obc")
          f = qfi_manybody_obc(family, lambda, L);
        else
          f = ssh ? ssh_tpt_closed_form(L) : chern_tpt_sum(L, family.t1, family.t2);
        row[2] = Cell::num(f);
      } catch (const Error& err) {
        row[4] = Cell::str(error_code_name(err.code()));
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

Table cmd_exponent_scan(const RunConfig& cfg) {
  if (cfg.model != "ssh" && cfg.model != "chern-wire" && cfg.model != "chern-bloch")
    config_error("exponent-scan supports models ssh, chern-wire and chern-bloch");
  const std::string method = cfg.method.empty() ? "edge" : cfg.method;
  ScanQuantity quantity;
  if (method == "edge")
    quantity = ScanQuantity::edge;
  else if (method == "manybody-pbc")
    quantity = ScanQuantity::manybody_pbc;
  else if (method == "manybody-obc")
    quantity = ScanQuantity::manybody_obc;
  else
    config_error("method must be edge, manybody-pbc or manybody-obc");
  if (cfg.lambda_grid.empty()) config_error("exponent-scan needs a lambda grid");
  if (cfg.sizes.size() < 5) config_error("exponent-scan needs at least 5 sizes");
  for (size_t i = 1; i < cfg.sizes.size(); ++i)
    if (cfg.sizes[i] <= cfg.sizes[i - 1]) config_error("sizes must increase strictly");
  const double ratio0 = static_cast<double>(cfg.sizes[1]) / cfg.sizes[0];
  for (size_t i = 1; i < cfg.sizes.size(); ++i) {
    const double ratio = static_cast<double>(cfg.sizes[i]) / cfg.sizes[i - 1];
    if (std::abs(ratio - ratio0) > 0.1 * ratio0)
      config_error("sizes must form a geometric grid");
  }

  const ModelFamily family = family_from_config(cfg);
  std::vector<ScanRow> rows = exponent_scan(family, quantity, cfg.lambda_grid, cfg.sizes);

  Table table;
  table.columns = {"lambda", "b", "a", "c", "rms_residual", "flags"};
  for (const ScanRow& r : rows) {
    table.rows.push_back({Cell::num(r.lambda), Cell::num(r.b), Cell::num(r.a), Cell::num(r.c),
                          Cell::num(r.rms_residual), Cell::str(r.flags)});
  }
  return table;
}

Table cmd_closed_forms(const RunConfig& cfg) {
  require_grids(cfg, "closed-forms");
  const ModelFamily family = family_from_config(cfg);

  Table table;
  table.columns = {"lambda",
                   "L",
                   "F_edge_closed_form",
                   "F_edge_critical_limit",
                   "F_ssh_critical_sum",
                   "F_ssh_per_site",
                   "F_chern_critical_sum",
                   "flags"};
  for (double lambda : cfg.lambda_grid) {
    for (int L : cfg.sizes) {
      std::vector<Cell> row(8, Cell::empty());
      row[0] = Cell::num(lambda);
      row[1] = Cell::num(L);
      row[7] = Cell::str("");
      try {
        if (lambda >= 0.0 && lambda < 1.0)
          row[2] = Cell::num(qfi_phi_z_closed_form(lambda, 1.0, L));
        row[3] = Cell::num(qfi_tpt_limit(1.0, 0.0, L));
        if (L >= 2 && L % 2 == 0) row[4] = Cell::num(ssh_tpt_closed_form(L));
        if (lambda >= 0.0 && std::abs(lambda - 1.0) >= 1e-9)
          row[5] = Cell::num(ssh_continuum_limit(lambda));
        row[6] = Cell::num(chern_tpt_sum(L, family.t1, family.t2));
      } catch (const Error& err) {
        row[7] = Cell::str(error_code_name(err.code()));
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

EstimateResult cmd_estimate(const RunConfig& cfg) {
  if (cfg.model != "ssh" && cfg.model != "chern-wire")
    config_error("estimate supports models ssh and chern-wire");
  if (cfg.lambda_grid.size() > 1) config_error("estimate takes a single lambda");
  if (cfg.sizes.size() > 1) config_error("estimate takes a single size");

  SimConfig sim;
  sim.family = family_from_config(cfg);
  sim.lambda_true = cfg.lambda_grid.empty() ? 0.5 : cfg.lambda_grid[0];
  sim.L = cfg.sizes.empty() ? 32 : cfg.sizes[0];
  const double samples = param_or(cfg, "samples", 10000.0);
  const double reps = param_or(cfg, "reps", 200.0);
  if (samples < 1.0 || samples != std::floor(samples))
    config_error("samples must be a positive integer");
  if (reps < 1.0 || reps != std::floor(reps)) config_error("reps must be a positive integer");
  sim.M = static_cast<long long>(samples);
  sim.R = static_cast<int>(reps);
  sim.seed = cfg.seed;
  sim.search_interval = {param_or(cfg, "interval_lo", 0.05), param_or(cfg, "interval_hi", 0.95)};
  if (!(sim.search_interval.first < sim.lambda_true &&
        sim.lambda_true < sim.search_interval.second))
    config_error("lambda must lie strictly inside the search interval");
  try {
    edge_state_derivative(sim.family, sim.lambda_true, sim.L);
  } catch (const Error& err) {
    config_error(std::string("no edge family at this lambda: ") + err.what());
  }

  EstimateResult result;
  result.report = estimator_stats(sim);
  result.per_run.columns = {"run", "estimate"};
  for (size_t i = 0; i < result.report.estimates.size(); ++i)
    result.per_run.rows.push_back(
        {Cell::num(static_cast<double>(i)), Cell::num(result.report.estimates[i])});
  return result;
}

std::string render_csv(const Table& table) {
  std::string out;
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += csv_escape(table.columns[c]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      switch (row[c].kind) {
        case Cell::Kind::Number: out += format_number(row[c].number); break;
        case Cell::Kind::Text: out += csv_escape(row[c].text); break;
        case Cell::Kind::Empty: break;
      }
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const Table& table) {
  json j;
  j["columns"] = table.columns;
  json rows = json::array();
  for (const auto& row : table.rows) {
    json cells = json::array();
    for (const Cell& cell : row) {
      switch (cell.kind) {
        case Cell::Kind::Number: cells.push_back(cell.number); break;
        case Cell::Kind::Text: cells.push_back(cell.text); break;
        case Cell::Kind::Empty: cells.push_back(nullptr); break;
      }
    }
    rows.push_back(std::move(cells));
  }
  j["rows"] = std::move(rows);
  return j.dump();
}

std::string render_estimate_json(const EstimationReport& report) {
  json j;
  j["mean_estimate"] = report.mean_estimate;
  j["sample_variance"] = report.sample_variance;
  j["predicted_crb"] = report.predicted_crb;
  j["ratio"] = report.ratio;
  j["estimates"] = report.estimates;
  j["run_failures"] = report.run_failures;
  j["cfi_true"] = report.cfi_true;
  return j.dump();
}

namespace {

bool all_rows_failed(const Table& table) {
  if (table.rows.empty()) return false;
  size_t flags_col = table.columns.size();
  for (size_t c = 0; c < table.columns.size(); ++c)
    if (table.columns[c] == "flags") flags_col = c;
  if (flags_col == table.columns.size()) return false;
  for (const auto& row : table.rows) {
    const Cell& cell = row[flags_col];
    const bool failed =
        cell.kind == Cell::Kind::Text && !cell.text.empty() && cell.text != "degenerate";
    if (!failed) return false;
  }
  return true;
}

} // namespace

RunOutput run_command(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json") config_error("format must be csv or json");

  RunOutput out;
  if (cfg.command == "estimate") {
    EstimateResult result = cmd_estimate(cfg);
    out.table = result.per_run;
    out.rendered = cfg.format == "json" ? render_estimate_json(result.report)
                                        : render_csv(result.per_run);
    const int runs = static_cast<int>(result.report.estimates.size());
    if (runs > 0 && result.report.run_failures >= runs) out.status = RunStatus::AllRowsFailed;
    return out;
  }

  if (cfg.command == "edge-qfi")
    out.table = cmd_edge_qfi(cfg);
  else if (cfg.command == "manybody-qfi")
    out.table = cmd_manybody_qfi(cfg);
  else if (cfg.command == "exponent-scan")
    out.table = cmd_exponent_scan(cfg);
  else if (cfg.command == "closed-forms")
    out.table = cmd_closed_forms(cfg);
  else
    config_error("unknown command: " + cfg.command);

  out.rendered = cfg.format == "json" ? render_json(out.table) : render_csv(out.table);
  if (all_rows_failed(out.table)) out.status = RunStatus::AllRowsFailed;
  return out;
}

} // namespace latqfi
