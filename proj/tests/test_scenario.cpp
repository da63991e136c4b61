#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "relpur/errors.hpp"
#include "relpur/scenario.hpp"

using namespace relpur;

namespace {

const char* kMinimalIsing = R"({"model":"ising","L":4,"params":{"J":1,"h_x":0.5,"h_z":-1.05}})";

ScenarioConfig small(const std::string& extra = "") {
  return parse_config(R"({"model":"ising","L":4,"params":{"J":1,"h_x":0.5,"h_z":-1.05},)"
                      R"("grid":{"t_max":5,"n_points":301})" +
                      extra + "}");
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("minimal config gets the documented defaults") {
  const ScenarioConfig c = parse_config(kMinimalIsing);
  CHECK(c.id == "ising_L4");
  CHECK(c.model == ModelKind::Ising);
  CHECK(c.sites == 4);
  CHECK(c.system_sites == 1);
  CHECK(c.t_max == 20.0);
  CHECK(c.n_points == 2001);
  CHECK(c.tolerances.degeneracy_tol == 1e-10);
  CHECK(c.initial_state.kind == InitialStateSpec::Kind::Cdw);
  CHECK(c.params.h_z == -1.05);
  CHECK(c.effective_probe_time() == 20.0);
  CHECK(c.wants("series"));
}

TEST_CASE("bitstring length is checked") {
  const std::string base = R"({"model":"ising","L":4,"params":{"J":1,"h_x":0.5,"h_z":-1.05},"initial_state":)";
  const ScenarioConfig ok = parse_config(base + R"("1010"})");
  CHECK(ok.initial_state.kind == InitialStateSpec::Kind::Bitstring);
  CHECK(ok.initial_state.bits == "1010");
  CHECK_THROWS_AS(parse_config(base + R"("10"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(base + R"("10a0"})"), ConfigError);
}

TEST_CASE("strict schema errors name the field") {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"model":"ising","L":4,"params":{"J":1,"h_x":0.5,"h_z":-1.05},"colour":1})")
            .find("colour") != std::string::npos);
  CHECK(message(R"({"model":"ising","L":4,"params":{"J":1,"h_x":0.5}})").find("params.h_z") !=
        std::string::npos);
  CHECK(message(R"({"model":"xxz","L":4,"params":{"J":1,"U":2,"J_nnn":0.2,"h_x":1}})")
            .find("params.h_x") != std::string::npos);
  CHECK(message(R"({"model":"ising","L":4,"L_S":4,"params":{"J":1,"h_x":0.5,"h_z":-1.05}})")
            .find("L_S") != std::string::npos);
  CHECK(message(R"({"model":"ising","L":4,"params":{"J":1,"h_x":0.5,"h_z":-1.05},"grid":{"n_points":1}})")
            .find("grid.n_points") != std::string::npos);
  CHECK(message(R"({"model":"ising","L":"4","params":{"J":1,"h_x":0.5,"h_z":-1.05}})")
            .find("L") != std::string::npos);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model":"heisenberg","L":4,"params":{}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model":"ising","L":4,"id":"../x","params":{"J":1,"h_x":0.5,"h_z":-1.05}})"),
                  ConfigError);
}

TEST_CASE("serialize and parse round trip") {
  const ScenarioConfig a = parse_config(
      R"({"id":"xxz_rt","model":"xxz","L":6,"L_S":2,"params":{"J":1,"U":2,"J_nnn":0.2},)"
      R"("initial_state":"101010","grid":{"t_max":12.5,"n_points":777},"probe_time":3.25,)"
      R"("averaging_T":1500,"tolerances":{"degeneracy_tol":1e-9,"support_floor":1e-13},)"
      R"("outputs":["bounds","curves"]})");
  const std::string text = serialize_config(a);
  const ScenarioConfig b = parse_config(text);
  CHECK(serialize_config(b) == text);
  CHECK(b.params.J_nnn == 0.2);
  CHECK(b.tolerances.support_floor == 1e-13);
  CHECK(b.probe_time == 3.25);
  CHECK(b.outputs == std::vector<std::string>{"bounds", "curves"});
}

TEST_CASE("sweep expansion") {
  const ScenarioConfig c = parse_config(
      R"({"id":"sw","model":"ising","sweep":{"L":[4,6]},"params":{"J":1,"h_x":0.5,"h_z":-1.05}})");
  const auto cfgs = expand_sweep(c);
  REQUIRE(cfgs.size() == 2);
  CHECK(cfgs[0].id == "sw_L4");
  CHECK(cfgs[1].sites == 6);
  CHECK(cfgs[1].sweep_sites.empty());
  ScenarioConfig other = cfgs[1];
  other.params.h_x = 0.3;
  CHECK_THROWS_AS(sweep({cfgs[0], other}), ConfigError);
}

TEST_CASE("series CSV layout") {
  const RunResult r = run_scenario(small());
  const std::string csv = series_csv(r);
  CHECK(first_line(csv) == "t,f,g,g_norm,avg_g_tau,speed_abs");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == std::ptrdiff_t(r.grid.size()) + 1);
  CHECK(r.f.size() == std::size_t(r.grid.size()));
  CHECK(r.g_norm.front() == doctest::Approx(1.0));
  CHECK(first_line(curves_csv(r)) == "tau,avg_g_tau,delta_tau,tau_1,tau_2,tau_3,tau_4,tau_qsl");
}

TEST_CASE("output is identical across runs and thread counts") {
  const ScenarioConfig c = parse_config(
      R"({"model":"xxz","L":6,"params":{"J":1,"U":2,"J_nnn":0.2},"grid":{"t_max":10,"n_points":1001}})");
  const RunResult a = run_scenario(c, 1);
  const RunResult b = run_scenario(c, 4);
  const RunResult again = run_scenario(c, 1);
  CHECK(series_csv(a) == series_csv(b));
  CHECK(curves_csv(a) == curves_csv(b));
  CHECK(bounds_json(a) == bounds_json(b));
  CHECK(series_csv(a) == series_csv(again));
  CHECK(bounds_json(a) == bounds_json(again));
}

TEST_CASE("eigenstate scenario has a zero normalized series") {
  const RunResult r = run_scenario(small(R"(,"initial_state":{"eigenstate":2})"));
  CHECK(r.g_initial < 1e-20);
  for (double v : r.g_norm) CHECK(v == 0.0);
  for (double v : r.f) CHECK(v == doctest::Approx(r.f.front()).epsilon(1e-12));
  const auto j = nlohmann::json::parse(bounds_json(r));
  CHECK(j["g_norm_zeroed"] == true);
}

TEST_CASE("bounds JSON re-parses to the same doubles") {
  const RunResult r = run_scenario(small());
  const auto j = nlohmann::json::parse(bounds_json(r));
  const auto& b = j["bounds"];
  for (int i = 1; i <= 4; ++i) {
    const std::string key = std::to_string(i);
    CHECK(b["tau_eq"][key].get<double>() == r.bounds.tau_eq[std::size_t(i - 1)]);
    CHECK(b["tau_lower"][key].get<double>() == r.bounds.tau_lower[std::size_t(i - 1)]);
  }
  CHECK(b["g_infinity"].get<double>() == r.bounds.g_infinity);
  CHECK(b["average_g"].get<double>() == r.bounds.average_g);
  CHECK(b["delta_tau"].get<double>() == r.bounds.delta_tau);
  CHECK(b["tau_qsl"]["value"].get<double>() == r.bounds.tau_qsl.value);
  CHECK(b["tau_qsl"]["index"].get<int>() == r.bounds.tau_qsl.index);
  CHECK(j["inputs"]["energy_spread"].get<double>() == r.bounds.inputs.energy_spread);
}

TEST_CASE("format_real keeps 17 significant digits") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_real(kInfinity) == "inf");
  CHECK(format_real(-kInfinity) == "-inf");
}

TEST_CASE("emit writes the artifact tree") {
  const auto dir = std::filesystem::temp_directory_path() / "relpur_emit_test";
  std::filesystem::remove_all(dir);
  const RunResult r = run_scenario(small());
  emit(r, OutputFormat::Csv, dir);
  for (const char* name : {"series.csv", "bounds.json", "curves.csv", "provenance.json"}) {
    CHECK(std::filesystem::exists(dir / "ising_L4" / name));
  }
  emit(r, OutputFormat::Json, dir);
  std::ifstream in(dir / "ising_L4" / "series.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j["t"].size() == std::size_t(r.grid.size()));
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(emit(r, OutputFormat::Csv, "/proc/relpur_not_writable"), IoError);
}

TEST_CASE("grid refinement is reported") {
  const RunResult r = run_scenario(parse_config(
      R"({"model":"ising","L":4,"params":{"J":1,"h_x":0.5,"h_z":-1.05},"grid":{"t_max":20,"n_points":11}})"));
  CHECK(r.grid_refined);
  CHECK(r.grid.size() > 11);
  CHECK(r.grid.resolves(build_context(r.config).spectrum.spectral_width()));
}
