#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "latqfi/latqfi.h"

namespace {

struct FlagValues {
  std::string model;
  std::string method;
  std::string lambda_grid_expr;
  std::string interval_expr;
  std::string format;
  std::string output;
  std::string config_path;
  std::vector<double> lambdas;
  std::vector<long long> sizes;
  double kx = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  long long samples = 0;
  long long reps = 0;
  unsigned long long seed = 0;
};

void add_common_options(CLI::App* sub, FlagValues& v) {
  sub->add_option("--model", v.model, "model id: ssh, chern-wire, chern-bloch");
  sub->add_option("--method", v.method,
                  "variant: manybody-qfi pbc-sum|projector-obc|closed-form, "
                  "exponent-scan edge|manybody-pbc|manybody-obc");
  CLI::Option* lam =
      sub->add_option("--lambda", v.lambdas, "coupling values, comma separated")->delimiter(',');
  CLI::Option* grid = sub->add_option("--lambda-grid", v.lambda_grid_expr, "coupling grid lo:hi:n");
  lam->excludes(grid);
  grid->excludes(lam);
  sub->add_option("--sizes", v.sizes, "system sizes L1,L2,...")->delimiter(',');
  sub->add_option("--kx", v.kx, "transverse momentum (chern-wire)");
  sub->add_option("--t1", v.t1, "hopping amplitude t1 (chern models)");
  sub->add_option("--t2", v.t2, "hopping amplitude t2 (chern models)");
  sub->add_option("--samples", v.samples, "measurement samples per run (estimate)");
  sub->add_option("--reps", v.reps, "independent runs (estimate)");
  sub->add_option("--interval", v.interval_expr, "search interval lo:hi (estimate)");
  sub->add_option("--seed", v.seed, "RNG seed");
  sub->add_option("--format", v.format, "output format: csv or json");
  sub->add_option("--output", v.output, "write the result to this path instead of stdout");
  sub->add_option("--config", v.config_path, "JSON config file; explicit flags override it");
}

bool parse_linspace(const std::string& expr, std::vector<double>& grid, std::string& error) {
  double lo = 0.0;
  double hi = 0.0;
  long long n = 0;
  int consumed = -1;
  if (std::sscanf(expr.c_str(), "%lf:%lf:%lld%n", &lo, &hi, &n, &consumed) != 3 ||
      consumed != static_cast<int>(expr.size()) || n < 1 || n > 1000000) {
    error = "--lambda-grid expects lo:hi:n with n in [1, 1000000], got '" + expr + "'";
    return false;
  }
  grid.clear();
  if (n == 1) {
    grid.push_back(lo);
    return true;
  }
  for (long long i = 0; i < n; ++i) grid.push_back(lo + (hi - lo) * i / (n - 1));
  return true;
}

bool parse_interval(const std::string& expr, double& lo, double& hi, std::string& error) {
  int consumed = -1;
  if (std::sscanf(expr.c_str(), "%lf:%lf%n", &lo, &hi, &consumed) != 2 ||
      consumed != static_cast<int>(expr.size())) {
    error = "--interval expects lo:hi, got '" + expr + "'";
    return false;
  }
  return true;
}

// Start from the config file (when given), overlay every flag the user set,
// and pin the command. Returns false with a message on malformed input.
bool build_config(const CLI::App& sub, const FlagValues& v, const std::string& command,
                  nlohmann::json& cfg, std::string& error) {
  cfg = nlohmann::json::object();
  if (sub.count("--config") > 0) {
    std::ifstream file(v.config_path);
    if (!file) {
      error = "cannot read config file '" + v.config_path + "'";
      return false;
    }
    std::ostringstream text;
    text << file.rdbuf();
    cfg = nlohmann::json::parse(text.str(), nullptr, false);
    if (cfg.is_discarded() || !cfg.is_object()) {
      error = "config file '" + v.config_path + "' is not a JSON object";
      return false;
    }
  }
  cfg["command"] = command;
  if (sub.count("--model") > 0) cfg["model"] = v.model;
  if (sub.count("--method") > 0) cfg["method"] = v.method;
  if (sub.count("--format") > 0) cfg["format"] = v.format;
  if (sub.count("--output") > 0) cfg["output"] = v.output;
  if (sub.count("--seed") > 0) cfg["seed"] = static_cast<std::uint64_t>(v.seed);
  if (sub.count("--lambda") > 0) cfg["lambda_grid"] = v.lambdas;
  if (sub.count("--lambda-grid") > 0) {
    std::vector<double> grid;
    if (!parse_linspace(v.lambda_grid_expr, grid, error)) return false;
    cfg["lambda_grid"] = grid;
  }
  if (sub.count("--sizes") > 0) cfg["sizes"] = v.sizes;

  if (!cfg.contains("params") || !cfg["params"].is_object())
    if (sub.count("--kx") + sub.count("--t1") + sub.count("--t2") + sub.count("--samples") +
            sub.count("--reps") + sub.count("--interval") >
        0)
      cfg["params"] = nlohmann::json::object();
  if (sub.count("--kx") > 0) cfg["params"]["kx"] = v.kx;
  if (sub.count("--t1") > 0) cfg["params"]["t1"] = v.t1;
  if (sub.count("--t2") > 0) cfg["params"]["t2"] = v.t2;
  if (sub.count("--samples") > 0) cfg["params"]["samples"] = static_cast<double>(v.samples);
  if (sub.count("--reps") > 0) cfg["params"]["reps"] = static_cast<double>(v.reps);
  if (sub.count("--interval") > 0) {
    double lo = 0.0;
    double hi = 0.0;
    if (!parse_interval(v.interval_expr, lo, hi, error)) return false;
    cfg["params"]["interval_lo"] = lo;
    cfg["params"]["interval_hi"] = hi;
  }
  return true;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fisher-information tables for tight-binding edge and ground states"};
  app.require_subcommand(1);
  app.set_version_flag("--version", []() { return std::string(lq_version()); });

  FlagValues v;
  struct SubDef {
    const char* name;
    const char* desc;
  };
  const SubDef subs[] = {
      {"edge-qfi", "edge-state QFI and position-measurement CFI over (lambda, L)"},
      {"manybody-qfi", "ground-state QFI via pbc-sum, projector-obc or closed-form"},
      {"exponent-scan", "power-law exponent of F(L) per lambda"},
      {"estimate", "Monte-Carlo maximum-likelihood estimation report"},
      {"closed-forms", "closed-form reference values per (lambda, L)"},
  };
  for (const SubDef& def : subs) add_common_options(app.add_subcommand(def.name, def.desc), v);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  nlohmann::json cfg;
  std::string error;
  if (!build_config(*sub, v, sub->get_name(), cfg, error)) {
    std::cerr << "error: " << error << '\n';
    return 2;
  }

  lq_session* session = lq_session_create();
  if (session == nullptr) {
    std::cerr << "error: cannot create session\n";
    return 3;
  }

  char* rendered = nullptr;
  const lq_status status = lq_run(session, cfg.dump().c_str(), &rendered);

  int exit_code = 0;
  if (status == LQ_OK || status == LQ_ERR_ALL_ROWS_FAILED) {
    const std::string output_path = cfg.value("output", std::string());
    if (!output_path.empty()) {
      std::ofstream out(output_path, std::ios::binary);
      out << rendered;
      if (!out) {
        std::cerr << "error: cannot write '" << output_path << "'\n";
        exit_code = 3;
      }
    } else {
      std::cout << rendered;
    }
    if (status == LQ_ERR_ALL_ROWS_FAILED) {
      std::cerr << "error: every row failed (" << lq_session_error(session) << ")\n";
      exit_code = 3;
    }
  } else {
    std::cerr << "error: " << lq_status_name(status) << ": " << lq_session_error(session) << '\n';
    exit_code = status == LQ_ERR_CONFIG ? 2 : 3;
  }

  lq_string_free(rendered);
  lq_session_destroy(session);
  return exit_code;
}
