#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "json.hpp"
#include "latqfi/edge.hpp"
#include "latqfi/many_body.hpp"
#include "latqfi/workflows.hpp"

using namespace latqfi;
using nlohmann::json;

namespace {

RunConfig parse(const std::string& text) { return parse_run_config(text); }

const Cell& cell(const Table& t, size_t row, const char* column) {
  for (size_t c = 0; c < t.columns.size(); ++c)
    if (t.columns[c] == column) return t.rows[row][c];
  throw std::runtime_error(std::string("no column ") + column);
}

} // namespace

TEST_SUITE("workflows") {

TEST_CASE("defaults and canonical form") {
  RunConfig cfg = parse("{}");
  CHECK(cfg.command.empty());
  CHECK(cfg.model == "ssh");
  CHECK(cfg.format == "csv");
  CHECK(cfg.seed == 1);
  CHECK(cfg.threads == 0);
  CHECK(canonical_config_json(cfg) ==
        "{\"command\":\"\",\"format\":\"csv\",\"lambda_grid\":[],\"method\":\"\","
        "\"model\":\"ssh\",\"output\":\"\",\"params\":{},\"seed\":1,\"sizes\":[],"
        "\"threads\":0}");
}

TEST_CASE("canonical form is a parse fixed point") {
  const std::string text = R"({
    "sizes": [8, 16],
    "command": "edge-qfi",
    "lambda_grid": [0.5, 0.25],
    "params": {"kx": 1.5707963267948966, "t1": 1.0},
    "seed": 99,
    "model": "chern-wire",
    "format": "json"
  })";
  std::string once = canonical_config_json(parse(text));
  std::string twice = canonical_config_json(parse(once));
  CHECK(once == twice);
  CHECK(once.find("\"command\":\"edge-qfi\"") != std::string::npos);
  CHECK(once.find("\"kx\":1.5707963267948966") != std::string::npos);
}

TEST_CASE("parse rejects malformed configs") {
  CHECK_RAISES(ErrorCode::ConfigError, parse("not json"));
  CHECK_RAISES(ErrorCode::ConfigError, parse("[1, 2]"));
  CHECK_RAISES(ErrorCode::ConfigError, parse(R"({"comand": "edge-qfi"})"));
  CHECK_RAISES(ErrorCode::ConfigError, parse(R"({"command": 3})"));
  CHECK_RAISES(ErrorCode::ConfigError, parse(R"({"seed": -1})"));
  CHECK_RAISES(ErrorCode::ConfigError, parse(R"({"seed": 1.5})"));
  CHECK_RAISES(ErrorCode::ConfigError, parse(R"({"threads": -2})"));
  CHECK_RAISES(ErrorCode::ConfigError, parse(R"({"lambda_grid": "0.5"})"));
  CHECK_RAISES(ErrorCode::ConfigError, parse(R"({"lambda_grid": [0.5, "x"]})"));
  CHECK_RAISES(ErrorCode::ConfigError, parse(R"({"sizes": [0]})"));
  CHECK_RAISES(ErrorCode::ConfigError, parse(R"({"sizes": [2000000000]})"));
  CHECK_RAISES(ErrorCode::ConfigError, parse(R"({"sizes": [4.5]})"));
  CHECK_RAISES(ErrorCode::ConfigError, parse(R"({"params": [1]})"));
  CHECK_RAISES(ErrorCode::ConfigError, parse(R"({"params": {"mass": 1.0}})"));
  CHECK_RAISES(ErrorCode::ConfigError, parse(R"({"params": {"kx": "pi"}})"));
}

TEST_CASE("edge table: closed form, numeric value and position information agree") {
  RunConfig cfg = parse(R"({"command":"edge-qfi","lambda_grid":[0.5],"sizes":[32]})");
  Table t = cmd_edge_qfi(cfg);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.columns == std::vector<std::string>{"lambda", "L", "F_closed_form", "F_numeric",
                                              "cfi_position", "flags"});
  double closed = cell(t, 0, "F_closed_form").number;
  double numeric = cell(t, 0, "F_numeric").number;
  double position = cell(t, 0, "cfi_position").number;
  CHECK(rel_close(closed, 64.0 / 9.0, 1e-12));
  CHECK(rel_close(numeric, closed, 1e-8));
  CHECK(rel_close(position, closed, 1e-8));
  CHECK(cell(t, 0, "flags").text.empty());
}

TEST_CASE("edge table: trivial phase and wire rows have no closed form") {
  RunConfig cfg = parse(R"({"command":"edge-qfi","lambda_grid":[1.5],"sizes":[24]})");
  Table t = cmd_edge_qfi(cfg);
  CHECK(cell(t, 0, "F_closed_form").kind == Cell::Kind::Empty);
  CHECK(cell(t, 0, "F_numeric").kind == Cell::Kind::Number);

  RunConfig wire = parse(
      R"({"command":"edge-qfi","model":"chern-wire","lambda_grid":[-3.9],"sizes":[64],
          "params":{"kx":1.5707963267948966}})");
  Table tw = cmd_edge_qfi(wire);
  CHECK(cell(tw, 0, "F_closed_form").kind == Cell::Kind::Empty);
  CHECK(cell(tw, 0, "F_numeric").number > 0.0);
  CHECK(cell(tw, 0, "flags").text.empty());
}

TEST_CASE("edge table: per-row errors become flags") {
  RunConfig cfg = parse(R"({"command":"edge-qfi","lambda_grid":[-0.7, 0.5],"sizes":[16]})");
  Table t = cmd_edge_qfi(cfg);
  REQUIRE(t.rows.size() == 2);
  CHECK(cell(t, 0, "flags").text == "InvalidParams");
  CHECK(cell(t, 0, "F_numeric").kind == Cell::Kind::Empty);
  CHECK(cell(t, 1, "flags").text.empty());

  CHECK_RAISES(ErrorCode::ConfigError,
               cmd_edge_qfi(parse(R"({"command":"edge-qfi","sizes":[16]})")));
  CHECK_RAISES(ErrorCode::ConfigError,
               cmd_edge_qfi(parse(
                   R"({"command":"edge-qfi","model":"band-inversion","lambda_grid":[0.5],"sizes":[16]})")));
}

TEST_CASE("ground-state table methods") {
  Table closed = cmd_manybody_qfi(
      parse(R"({"command":"manybody-qfi","method":"closed-form","lambda_grid":[1.0],"sizes":[6]})"));
  CHECK(rel_close(cell(closed, 0, "F").number, 5.0 / 3.0, 1e-14));
  CHECK(cell(closed, 0, "method").text == "closed-form");

  Table pbc = cmd_manybody_qfi(
      parse(R"({"command":"manybody-qfi","lambda_grid":[0.5],"sizes":[64]})"));
  CHECK(cell(pbc, 0, "method").text == "pbc-sum");
  CHECK(rel_close(cell(pbc, 0, "F").number / 64.0, 2.0 / 3.0, 0.02));

  Table obc = cmd_manybody_qfi(parse(
      R"({"command":"manybody-qfi","method":"projector-obc","lambda_grid":[0.5],"sizes":[16]})"));
  CHECK(cell(obc, 0, "F").number ==
        qfi_manybody_obc(family_from_id("ssh"), 0.5, 16));

  Table chern = cmd_manybody_qfi(parse(
      R"({"command":"manybody-qfi","model":"chern-bloch","method":"closed-form",
          "lambda_grid":[-4.0],"sizes":[8]})"));
  CHECK(rel_close(cell(chern, 0, "F").number, 0.7025982401452258, 1e-13));
}

TEST_CASE("ground-state table validation and flagged rows") {
  CHECK_RAISES(ErrorCode::ConfigError,
               cmd_manybody_qfi(parse(
                   R"({"command":"manybody-qfi","method":"closed-form","lambda_grid":[0.5],"sizes":[8]})")));
  CHECK_RAISES(ErrorCode::ConfigError,
               cmd_manybody_qfi(parse(
                   R"({"command":"manybody-qfi","method":"magic","lambda_grid":[1.0],"sizes":[8]})")));
  CHECK_RAISES(ErrorCode::ConfigError,
               cmd_manybody_qfi(parse(
                   R"({"command":"manybody-qfi","model":"chern-wire","lambda_grid":[1.0],"sizes":[8]})")));

  Table odd = cmd_manybody_qfi(
      parse(R"({"command":"manybody-qfi","method":"closed-form","lambda_grid":[1.0],"sizes":[7]})"));
  CHECK(cell(odd, 0, "flags").text == "OddL");
  CHECK(cell(odd, 0, "F").kind == Cell::Kind::Empty);
}

TEST_CASE("exponent table delegates to the scan") {
  Table t = cmd_exponent_scan(parse(
      R"({"command":"exponent-scan","method":"manybody-pbc","lambda_grid":[1.0],
          "sizes":[16,32,64,128,256]})"));
  REQUIRE(t.rows.size() == 1);
  CHECK(std::abs(cell(t, 0, "b").number - 2.014620) < 0.01);
  CHECK(cell(t, 0, "flags").text.empty());

  CHECK_RAISES(ErrorCode::ConfigError,
               cmd_exponent_scan(parse(
                   R"({"command":"exponent-scan","lambda_grid":[0.5],"sizes":[16,32,64,128]})")));
  CHECK_RAISES(ErrorCode::ConfigError,
               cmd_exponent_scan(parse(
                   R"({"command":"exponent-scan","lambda_grid":[0.5],"sizes":[16,32,64,128,200]})")));
  CHECK_RAISES(ErrorCode::ConfigError,
               cmd_exponent_scan(parse(
                   R"({"command":"exponent-scan","method":"sideways","lambda_grid":[0.5],
                       "sizes":[16,32,64,128,256]})")));
}

TEST_CASE("closed-form table guards each column") {
  Table t = cmd_closed_forms(parse(
      R"({"command":"closed-forms","lambda_grid":[0.5,1.0,1.5],"sizes":[8]})"));
  REQUIRE(t.rows.size() == 3);

  CHECK(rel_close(cell(t, 0, "F_edge_closed_form").number,
                  qfi_phi_z_closed_form(0.5, 1.0, 8), 1e-14));
  CHECK(rel_close(cell(t, 0, "F_edge_critical_limit").number, 21.0, 1e-14));
  CHECK(rel_close(cell(t, 0, "F_ssh_critical_sum").number, 3.5, 1e-14));
  CHECK(rel_close(cell(t, 0, "F_ssh_per_site").number, 2.0 / 3.0, 1e-14));
  CHECK(rel_close(cell(t, 0, "F_chern_critical_sum").number, 0.7025982401452258, 1e-13));

  // lambda = 1: no edge ansatz, the per-site limit diverges.
  CHECK(cell(t, 1, "F_edge_closed_form").kind == Cell::Kind::Empty);
  CHECK(cell(t, 1, "F_ssh_per_site").kind == Cell::Kind::Empty);
  CHECK(cell(t, 1, "F_ssh_critical_sum").kind == Cell::Kind::Number);

  // lambda = 1.5: trivial phase, per-site limit exists again.
  CHECK(cell(t, 2, "F_edge_closed_form").kind == Cell::Kind::Empty);
  CHECK(rel_close(cell(t, 2, "F_ssh_per_site").number, 1.0 / 5.625, 1e-12));
}

TEST_CASE("estimate command wraps the simulation") {
  RunConfig cfg = parse(
      R"({"command":"estimate","lambda_grid":[0.5],"sizes":[16],
          "params":{"samples":500,"reps":5},"seed":3})");
  EstimateResult res = cmd_estimate(cfg);
  CHECK(res.report.estimates.size() == 5);
  REQUIRE(res.per_run.rows.size() == 5);
  CHECK(res.per_run.columns == std::vector<std::string>{"run", "estimate"});
  CHECK(cell(res.per_run, 4, "run").number == 4.0);

  CHECK_RAISES(ErrorCode::ConfigError,
               cmd_estimate(parse(
                   R"({"command":"estimate","params":{"samples":0}})")));
  CHECK_RAISES(ErrorCode::ConfigError,
               cmd_estimate(parse(
                   R"({"command":"estimate","params":{"reps":2.5}})")));
  CHECK_RAISES(ErrorCode::ConfigError,
               cmd_estimate(parse(
                   R"({"command":"estimate","lambda_grid":[0.99]})")));
  CHECK_RAISES(ErrorCode::ConfigError,
               cmd_estimate(parse(
                   R"({"command":"estimate","lambda_grid":[0.3,0.5]})")));
  CHECK_RAISES(ErrorCode::ConfigError,
               cmd_estimate(parse(
                   R"({"command":"estimate","model":"chern-bloch"})")));
}

TEST_CASE("csv rendering: 17 significant digits, quoting, empty cells") {
  Table t;
  t.columns = {"a", "b c", "d"};
  t.rows.push_back({Cell::num(0.5), Cell::str("x,y"), Cell::empty()});
  t.rows.push_back({Cell::num(32.0), Cell::str("plain"), Cell::num(7.1111111111111107)});
  CHECK(render_csv(t) == "a,b c,d\n0.5,\"x,y\",\n32,plain,7.1111111111111107\n");
}

TEST_CASE("json rendering: null for empty and non-finite cells") {
  Table t;
  t.columns = {"x", "y"};
  t.rows.push_back({Cell::num(1.5), Cell::empty()});
  t.rows.push_back({Cell::str("InvalidParams"), Cell::num(std::nan(""))});
  json parsed = json::parse(render_json(t));
  CHECK(parsed["columns"] == json::array({"x", "y"}));
  CHECK(parsed["rows"][0][0] == 1.5);
  CHECK(parsed["rows"][0][1].is_null());
  CHECK(parsed["rows"][1][0] == "InvalidParams");
  CHECK(parsed["rows"][1][1].is_null());
}

TEST_CASE("run_command dispatch, formats and failure status") {
  RunOutput out = run_command(parse(
      R"({"command":"closed-forms","lambda_grid":[0.5],"sizes":[8],"format":"json"})"));
  CHECK(out.status == RunStatus::Ok);
  CHECK(json::parse(out.rendered)["columns"].size() == 8);

  CHECK_RAISES(ErrorCode::ConfigError, run_command(parse(R"({"command":"fly"})")));
  CHECK_RAISES(ErrorCode::ConfigError,
               run_command(parse(R"({"command":"edge-qfi","format":"yaml"})")));

  RunOutput failed = run_command(parse(
      R"({"command":"edge-qfi","lambda_grid":[-0.7],"sizes":[16]})"));
  CHECK(failed.status == RunStatus::AllRowsFailed);
  CHECK(!failed.rendered.empty());
}

TEST_CASE("estimate output is deterministic and carries the report keys") {
  const std::string text =
      R"({"command":"estimate","params":{"samples":400,"reps":4},"seed":11,"format":"json"})";
  RunOutput a = run_command(parse(text));
  RunOutput b = run_command(parse(text));
  CHECK(a.rendered == b.rendered);
  CHECK(a.rendered.rfind("{\"cfi_true\":", 0) == 0);

  json rep = json::parse(a.rendered);
  for (const char* key : {"cfi_true", "estimates", "mean_estimate", "predicted_crb", "ratio",
                          "run_failures", "sample_variance"})
    CHECK(rep.contains(key));
  CHECK(rep["estimates"].size() == 4);

  RunOutput csv = run_command(parse(
      R"({"command":"estimate","params":{"samples":400,"reps":4},"seed":11})"));
  CHECK(csv.rendered.rfind("run,estimate\n", 0) == 0);
}

} // TEST_SUITE
