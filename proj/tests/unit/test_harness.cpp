#include <doctest.h>

#include "superqd/config.hpp"
#include "superqd/export.hpp"
#include "superqd/harness.hpp"
#include "superqd/scenario.hpp"
#include "superqd/units.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace superqd;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Cheap scenario: resonant Gaussian, one photon per mode at most.
Scenario small_scenario() {
  Scenario s;
  s.name = "small";
  s.kind = ExcitationKind::gaussian_resonant;
  s.gaussian = {1.0, 2.0, std::nullopt};
  s.kappa_over_g = 4.0;
  s.n_max = 1;
  s.photon_quality = false;
  s.t_end_ps = 40.0;
  return s;
}

fs::path scratch_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("superqd-test-" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("pulse tables match the transcription") {
  std::ifstream f(fs::path(SUPERQD_TEST_DATA_DIR) / "pulse_tables.csv");
  REQUIRE(f.good());
  std::string line;
  std::getline(f, line);
  int rows = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    REQUIRE(c.size() == 10);
    const auto& p = pulse_set(c[0]);
    CHECK(p.detuning_1_meV == std::stod(c[1]));
    CHECK(p.detuning_2_meV == std::stod(c[2]));
    CHECK(p.area_1_pi == std::stod(c[3]));
    CHECK(p.area_2_pi == std::stod(c[4]));
    CHECK(p.sigma_1_ps == std::stod(c[5]));
    CHECK(p.sigma_2_ps == std::stod(c[6]));
    CHECK(p.delay_ps == std::stod(c[7]));
    CHECK(p.phase_pi == std::stod(c[8]));
    CHECK(p.binding_meV == std::stod(c[9]));
    ++rows;
  }
  CHECK(rows == static_cast<int>(pulse_sets().size()));
  CHECK_THROWS_AS(pulse_set("table3-set1"), std::invalid_argument);
}

TEST_CASE("preset table sets reach the system unchanged") {
  for (const auto& set : pulse_sets()) {
    const auto& s = preset(set.name).scenarios.at(0);
    const auto spec = build_system(s);
    const auto& p = std::get<PulsePair>(spec.drive);
    CHECK(p.area_1_pi == set.area_1_pi);
    CHECK(p.area_2_pi == set.area_2_pi);
    CHECK(p.detuning_1_meV == set.detuning_1_meV);
    CHECK(p.detuning_2_meV == set.detuning_2_meV);
    CHECK(p.sigma_1_ps == set.sigma_1_ps);
    CHECK(p.sigma_2_ps == set.sigma_2_ps);
    CHECK(p.delay_ps == set.delay_ps);
    CHECK(p.phase_pi == set.phase_pi);
    CHECK(spec.levels.binding() == set.binding_meV);
    if (set.targets_biexciton) {
      CHECK(spec.cavity.energy_h_meV == doctest::Approx(0.5 * spec.levels.e_biexciton()));
    } else {
      CHECK(spec.cavity.energy_h_meV == doctest::Approx(spec.levels.e_exciton_h()));
    }
  }
}

TEST_CASE("figure presets") {
  SUBCASE("fig3-super sweeps two couplings and four losses") {
    const auto& s = preset("fig3-super").scenarios.at(0);
    const auto pts = sweep_points(s);
    REQUIRE(pts.size() == 8);
    std::set<std::pair<double, double>> seen;
    for (const auto& p : pts) {
      const auto sp = at_point(s, p);
      seen.insert({sp.g_ueV, sp.kappa_over_g});
      const auto spec = build_system(sp);
      CHECK(spec.cavity.kappa_per_ps == doctest::Approx(meV_to_rad_per_ps(sp.kappa_over_g * sp.g_ueV * 1e-3)));
      CHECK(spec.cavity.kappa_over_g() == doctest::Approx(sp.kappa_over_g));
    }
    for (double g : {20.0, 66.0})
      for (double k : {0.5, 1.0, 2.0, 4.0}) CHECK(seen.count({g, k}) == 1);
  }
  SUBCASE("fig4 runs three excitation kinds") {
    const auto& p = preset("fig4");
    REQUIRE(p.scenarios.size() == 3);
    std::set<ExcitationKind> kinds;
    for (const auto& s : p.scenarios) {
      kinds.insert(s.kind);
      CHECK(s.concurrence);
      CHECK(s.binding_meV == 1.0);
      CHECK(sweep_points(s).size() == 4);
    }
    CHECK(kinds.size() == 3);
    const auto g = build_system(p.scenarios[1]);
    const auto& pulse = std::get<PulsePair>(g.drive);
    CHECK(pulse.area_1_pi == 3.3);
    CHECK(pulse.sigma_1_ps == 5.0);
    // Two-photon resonance with B: hbar omega = E_B / 2.
    CHECK(pulse.detuning_1_meV == doctest::Approx(0.5 * g.levels.e_biexciton() - g.levels.e_exciton_h()));
    CHECK(pulse.detuning_1_meV == doctest::Approx(-0.5).epsilon(0.01));
  }
  SUBCASE("figA3 covers a full phase period at zero coupling") {
    const auto& s = preset("figA3").scenarios.at(0);
    CHECK(s.g_ueV == 0.0);
    const auto& v = s.axes.at(0).values;
    CHECK(v.front() == 0.0);
    CHECK(v.back() == 2.0);
  }
  SUBCASE("every preset point builds") {
    for (const auto& p : presets())
      for (const auto& s : p.scenarios)
        for (const auto& pt : sweep_points(s)) CHECK_NOTHROW(build_system(at_point(s, pt)));
  }
  CHECK_THROWS_AS(preset("fig9"), std::invalid_argument);
}

TEST_CASE("sweep expansion") {
  Scenario s;
  s.axes = {{"g_ueV", {20.0, 66.0}}, {"kappa_over_g", {0.5, 1.0, 2.0}}};
  const auto pts = sweep_points(s);
  REQUIRE(pts.size() == 6);
  CHECK(pts[1].values[0].second == 20.0);
  CHECK(pts[1].values[1].second == 1.0);
  CHECK(pts[3].values[0].second == 66.0);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(pts[i].index == i);
  CHECK(sweep_points(Scenario{}).size() == 1);

  Scenario bad;
  bad.axes = {{"kappa_over_g", {}}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.axes = {{"temperature_K", {4.0}}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.axes = {{"g_ueV", {1.0}}, {"g_ueV", {2.0}}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("run_scenario") {
  SUBCASE("no axes gives one row") {
    const auto r = run_scenario(small_scenario());
    REQUIRE(r.rows.size() == 1);
    const auto& row = r.rows[0];
    CHECK(row.error.empty());
    REQUIRE(row.metrics.has_value());
    CHECK(row.metrics->mode(Mode::H).emission.value > 0.5);
    CHECK_FALSE(row.gates_run);
    CHECK(row.converged);
    CHECK(row.populations.max_trace_error < 1e-8);
  }
  SUBCASE("rows are ordered by sweep index") {
    Scenario s = small_scenario();
    s.axes = {{"kappa_over_g", {4.0, 2.0, 8.0}}};
    const auto r = run_scenario(s, RunOptions{.threads = 2});
    REQUIRE(r.rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(r.rows[i].point.index == i);
      CHECK(r.rows[i].point.values[0].second == s.axes[0].values[i]);
    }
  }
  SUBCASE("failures carry scenario and point context") {
    Scenario s = small_scenario();
    s.coarse_spacing_ps = 0.7;
    s.axes = {{"g_ueV", {30.0, 40.0}}};
    const auto r = run_scenario(s);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[1].error.find("scenario 'small' point 1 (g_ueV = 40)") != std::string::npos);
    CHECK_FALSE(r.rows[1].converged);
    CHECK_THROWS_WITH_AS(run_scenario(s, RunOptions{.fail_fast = true}), doctest::Contains("scenario 'small'"),
                         std::runtime_error);
  }
  SUBCASE("headline gates are recorded") {
    Scenario s = small_scenario();
    const auto r = run_scenario(s, RunOptions{.headline = true});
    const auto& row = r.rows.at(0);
    CHECK(row.gates_run);
    std::set<std::string> gates;
    for (const auto& c : row.metrics->convergence) gates.insert(c.gate);
    CHECK(gates == std::set<std::string>{"fock", "grid", "tolerance"});
    CHECK(row.converged == row.metrics->converged());
  }
}

TEST_CASE("phase and detuning sweeps") {
  Scenario s;
  s.pulses = pulse_set("table1-set1");
  s.g_ueV = 0.0;
  s.n_max = 1;
  const auto ph = phase_sweep(s, {0.5});
  REQUIRE(ph.rows.size() == 1);
  CHECK(ph.rows[0].populations.t_end_ps >= drive_off_time(build_system(s).drive));
  CHECK_FALSE(ph.rows[0].metrics.has_value());
  CHECK(ph.rows[0].populations.final_levels[1] > 0.9);

  Scenario c = s;
  c.g_ueV = 66.0;
  c.kappa_over_g = 4.0;
  const auto cd = cavity_detuning_sweep(c, {1.0});
  REQUIRE(cd.rows.size() == 1);
  REQUIRE(cd.rows[0].traces.has_value());
  CHECK(cd.rows[0].traces->t_ps.size() > 10);

  Scenario g = s;
  g.kind = ExcitationKind::gaussian_resonant;
  CHECK_THROWS_AS(phase_sweep(g, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(cavity_detuning_sweep(g, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(phase_sweep(s, {}), std::invalid_argument);
}

TEST_CASE("yaml configuration") {
  const std::string text = R"(
name: cfg
excitation:
  kind: super
  pulse_set: table1-set4
  phase_pi: 0.25
cavity:
  tuning: two_photon_resonant
  g_ueV: 40
  kappa_over_g: 2
numerics:
  rtol: 1e-7
  t_end_ps: 80
outputs:
  modes: [H, V]
  concurrence: true
sweep:
  - axis: kappa_over_g
    values: [0.5, 1]
  - axis: phase_pi
    linspace: [0, 1, 3]
)";
  const auto s = parse_scenario(text);
  CHECK(s.name == "cfg");
  CHECK(s.pulses.delay_ps == 5.47);
  CHECK(s.pulses.phase_pi == 0.25);
  CHECK(s.binding_meV == 1.0);
  CHECK(s.tuning == CavityTuning::two_photon_resonant);
  CHECK(s.g_ueV == 40.0);
  CHECK(s.tolerances.relative == 1e-7);
  CHECK(*s.t_end_ps == 80.0);
  CHECK(s.modes.size() == 2);
  REQUIRE(s.axes.size() == 2);
  CHECK(s.axes[1].values == std::vector<double>{0.0, 0.5, 1.0});

  SUBCASE("round trip") {
    const auto again = parse_scenario(to_yaml(s));
    CHECK(to_yaml(again) == to_yaml(s));
    CHECK(again.pulses.detuning_2_meV == s.pulses.detuning_2_meV);
    CHECK(again.axes[1].values == s.axes[1].values);
  }
  SUBCASE("errors name the key path") {
    CHECK_THROWS_WITH_AS(parse_scenario("cavity:\n  kappa: 1\n"), doctest::Contains("config.cavity.kappa"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario("cavity:\n  g_ueV: lots\n"), doctest::Contains("config.cavity.g_ueV"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario("outputs:\n  modes: [D]\n"), doctest::Contains("modes"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario("sweep:\n  - axis: g_ueV\n    values: []\n"), doctest::Contains("empty"),
                         ConfigError);
    CHECK_THROWS_AS(parse_scenario("excitation: {kind: laser}\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("name: [unclosed\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(""), ConfigError);
    CHECK_THROWS_WITH_AS(load_scenario("/nonexistent/x.yaml"), doctest::Contains("/nonexistent/x.yaml"), ConfigError);
  }
}

TEST_CASE("csv export") {
  SUBCASE("fig3-shaped rows") {
    ScenarioResult r;
    r.scenario = preset("fig3-super").scenarios.at(0);
    for (const auto& p : sweep_points(r.scenario)) {
      ResultRow row;
      row.scenario = r.scenario.name;
      row.point = p;
      MetricsReport m;
      ModeMetrics mm;
      mm.emission.value = 0.95;
      mm.purity = 0.999;
      mm.indistinguishability = 0.97;
      m.modes.push_back(mm);
      row.metrics = m;
      r.rows.push_back(row);
    }
    const auto csv = rows_csv(r);
    std::stringstream ss(csv);
    std::string line;
    std::getline(ss, line);
    const auto header = split(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const char* name : {"g_ueV", "kappa_over_g", "emission_prob_H", "purity_H", "indist_H"}) {
      CHECK(col.count(name) == 1);
    }
    int n = 0;
    while (std::getline(ss, line)) {
      const auto cells = split(line + ",");  // keep the trailing empty cell
      CHECK(cells.size() == header.size());
      CHECK(cells[col["purity_H"]] == "0.999");
      ++n;
    }
    CHECK(n == 8);
  }
  SUBCASE("spectrum pairs") {
    Spectrum s;
    s.omega_rel_meV = {-1.0, 0.0, 1.0};
    s.normalized = {0.25, 1.0, 0.5};
    s.peak = 3.0;
    CHECK(spectrum_csv(s) == "omega_rel_meV,S_normalized\n-1,0.25\n0,1\n1,0.5\n");
  }
  SUBCASE("identical configs give identical bytes") {
    Scenario s = small_scenario();
    s.traces = true;
    s.spectra = true;
    s.spectrum_grid = {1.0, 50};
    const auto dir1 = scratch_dir("a"), dir2 = scratch_dir("b");
    const auto f1 = export_result(run_scenario(s), dir1);
    const auto f2 = export_result(run_scenario(s), dir2);
    CHECK(slurp(f1.rows) == slurp(f2.rows));
    CHECK(slurp(f1.traces) == slurp(f2.traces));
    REQUIRE(f1.spectra.size() == 1);
    CHECK(slurp(f1.spectra[0]) == slurp(f2.spectra[0]));
    CHECK(parse_scenario(slurp(f1.config)).name == "small");
    CHECK(slurp(f1.timing).rfind("point,wall_s\n", 0) == 0);
    const auto spec_text = slurp(f1.spectra[0]);
    CHECK(spec_text.find(",1\n") != std::string::npos);
    fs::remove_all(dir1);
    fs::remove_all(dir2);
  }
  SUBCASE("unwritable destination") {
    ScenarioResult r;
    r.scenario = small_scenario();
    CHECK_THROWS_AS(export_result(r, "/proc/superqd-cannot-exist"), ExportError);
  }
  CHECK_THROWS_AS(parse_export_format("parquet"), std::invalid_argument);
}
