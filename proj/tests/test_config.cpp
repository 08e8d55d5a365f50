#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "chflow/config.hpp"
#include "chflow/errors.hpp"
#include "test_support.hpp"

using namespace chflow;
using testing::max_diff;

namespace {
const double pi = std::numbers::pi;

const char* kMinimal = R"({"model": {"a": 2, "s": 2, "kappa": 1, "alpha": 0},
  "initial": {"kind": "single_mode", "target": "u", "amplitude": 1, "wavenumber": 1}})";
}  // namespace

TEST_CASE("minimal config takes the defaults") {
  const SimulationConfig c = parse_config(kMinimal);
  CHECK(c.n == 256);
  CHECK(c.stepper.dt == 1e-3);
  CHECK(c.stepper.sample_every == 10);
  CHECK(c.thresholds.slope_limit == 1e3);
  CHECK(c.thresholds.tail_fraction_limit == 0.1);
  CHECK_FALSE(c.flow_map);
  CHECK_FALSE(c.preset.has_value());
  REQUIRE(c.initial.components.size() == 1);
  CHECK(c.initial.components[0].kind == InitialComponent::Kind::single_mode);
  CHECK(c.model.s == 2.0);
}

TEST_CASE("invariant violations name the field") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"model": {"s": 0.5}})"), doctest::Contains("s >= 1"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"grid": {"n": 255}})"), doctest::Contains("grid.n"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"model": {"kappa": -1}})"), doctest::Contains("kappa"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"stepper": {"dt": 0}})"), doctest::Contains("dt"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"stepper": {"t_end": -2}})"), doctest::Contains("t_end"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"stepper": {"dt": "fast"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"output": {"snapshot_every": 15}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
}

TEST_CASE("unknown keys are listed") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"modle": {}, "extra": 1})"), doctest::Contains("extra, modle"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"model": {"a": 2, "beta": 1}})"), doctest::Contains("model: beta"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"initial": {"kind": "single_mode", "amp": 1}})"),
                       doctest::Contains("amp"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"initial": {"kind": "fourier_list", "u": [{"k": 1, "cosine": 1}]}})"),
      doctest::Contains("initial.u[0]"), ConfigError);
}

TEST_CASE("initial data beyond the band is rejected") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"grid": {"n": 32}, "initial": {"kind": "single_mode", "wavenumber": 11}})"),
                       doctest::Contains("dealiasing band"), ConfigError);
  CHECK_NOTHROW(parse_config(R"({"grid": {"n": 32}, "initial": {"kind": "single_mode", "wavenumber": 10}})"));
  CHECK_THROWS_AS(parse_config(R"({"initial": {"kind": "gaussian_bump", "width": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"initial": {"kind": "sawtooth"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"initial": {"kind": "single_mode", "target": "v"}})"), ConfigError);
}

TEST_CASE("presets") {
  const auto names = preset_names();
  CHECK(names == std::vector<std::string>{"ch_breaking", "global_s2", "twocomp_smooth"});
  CHECK_THROWS_AS(parse_config(R"({"preset": "nope"})"), ConfigError);

  const SimulationConfig ch = parse_config(R"({"preset": "ch_breaking"})");
  CHECK(ch.model.s == 1.0);
  CHECK(ch.model.a == 2.0);
  CHECK(ch.model.kappa == 0.0);
  CHECK(ch.model.alpha == 0.0);
  const SimulationConfig g2 = parse_config(R"({"preset": "global_s2"})");
  CHECK(g2.model.s == 2.0);

  const SimulationConfig tc = parse_config(R"({"preset": "twocomp_smooth"})");
  CHECK(tc.flow_map);
  const PeriodicGrid grid(tc.n);
  const AlgebraElement U = build_initial_condition(tc.initial, grid, tc.model.alpha);
  const auto u = SpectralField::sampled(grid, [](double x) { return 0.5 * std::cos(2 * pi * x); });
  const auto rho = SpectralField::sampled(grid, [](double x) { return 2.0 + 0.5 * std::sin(2 * pi * x); });
  CHECK(max_diff(U.u, u) < 1e-14);
  CHECK(max_diff(U.rho, rho) < 1e-14);
}

TEST_CASE("document layers over the preset") {
  const SimulationConfig c =
      parse_config(R"({"preset": "twocomp_smooth", "grid": {"n": 64}, "model": {"a": 3}, "stepper": {"dt": 5e-4}})");
  CHECK(c.n == 64);
  CHECK(c.model.a == 3.0);
  CHECK(c.model.s == 2.0);   // from the preset
  CHECK(c.model.kappa == 1.0);
  CHECK(c.stepper.dt == 5e-4);
  CHECK(c.stepper.t_end == 5.0);

  // a document "initial" replaces the preset's wholesale
  const SimulationConfig d = parse_config(
      R"({"preset": "twocomp_smooth", "initial": {"kind": "single_mode", "target": "rho", "wavenumber": 2}})");
  REQUIRE(d.initial.components.size() == 1);
  CHECK(d.initial.components[0].target == FieldTarget::rho);
  CHECK(d.initial.rho_offset == 0.0);
}

TEST_CASE("to_json echoes a config that parses back to itself") {
  for (const char* text :
       {kMinimal, R"({"preset": "twocomp_smooth", "grid": {"n": 96}})",
        R"({"initial": {"components": [{"kind": "gaussian_bump", "center": 0.3, "width": 0.05, "target": "both"},
                                       {"kind": "fourier_list", "u": [{"k": 2, "sin": -1}]}], "u_offset": 0.25},
            "sweep": {"s": [1, 2], "kappa": [0.5]}, "output": {"dir": "runs/x", "snapshot_every": 20}})"}) {
    const SimulationConfig c = parse_config(text);
    const nlohmann::json j = to_json(c);
    const SimulationConfig back = parse_config(j.dump());
    CHECK(to_json(back) == j);
    CHECK(j.contains("stepper"));
    CHECK(j["grid"]["n"] == c.n);
  }
}

TEST_CASE("sweep section") {
  const SimulationConfig c = parse_config(R"({"sweep": {"s": [1, 2]}})");
  REQUIRE(c.sweep);
  CHECK(c.sweep->s == std::vector<double>{1, 2});
  CHECK(c.sweep->a.empty());
  CHECK_THROWS_WITH_AS(parse_config(R"({"sweep": {"s": []}})"), doctest::Contains("sweep.s"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"sweep": {"s": ["one"]}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"sweep": {"q": [1]}})"), ConfigError);
}

TEST_CASE("initial condition construction") {
  const PeriodicGrid grid(64);

  SUBCASE("single mode") {
    const SimulationConfig c = parse_config(kMinimal);
    const AlgebraElement U = build_initial_condition(c.initial, grid, 0.0);
    CHECK(max_diff(U.u, SpectralField::sampled(grid, [](double x) { return std::cos(2 * pi * x); })) < 1e-14);
    CHECK(U.rho.max_abs_sample() == 0.0);
  }
  SUBCASE("constant rho offset plus a rho mode") {
    const SimulationConfig c = parse_config(
        R"({"initial": {"kind": "single_mode", "target": "rho", "amplitude": 1, "wavenumber": 1, "rho_offset": 2}})");
    const AlgebraElement U = build_initial_condition(c.initial, grid, 0.0);
    CHECK(max_diff(U.rho, SpectralField::sampled(grid, [](double x) { return 2 + std::cos(2 * pi * x); })) < 1e-14);
    CHECK(oversampled_min(U.rho) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("phase and both targets") {
    InitialConditionSpec spec;
    InitialComponent comp;
    comp.target = FieldTarget::both;
    comp.amplitude = 0.7;
    comp.wavenumber = 3;
    comp.phase = 0.4;
    spec.components.push_back(comp);
    const AlgebraElement U = build_initial_condition(spec, grid, 1.5);
    const auto f = SpectralField::sampled(grid, [](double x) { return 0.7 * std::cos(6 * pi * x + 0.4); });
    CHECK(max_diff(U.u, f) < 1e-14);
    CHECK(max_diff(U.rho, f) < 1e-14);
    CHECK(U.alpha == 1.5);
  }
  SUBCASE("empty spec gives zero fields") {
    const AlgebraElement U = build_initial_condition({}, grid, 0.0);
    CHECK(U.u.max_abs_sample() == 0.0);
    CHECK(U.rho.max_abs_sample() == 0.0);
  }
  SUBCASE("gaussian bump matches the periodised Gaussian") {
    InitialConditionSpec spec;
    InitialComponent comp;
    comp.kind = InitialComponent::Kind::gaussian_bump;
    comp.amplitude = 1.2;
    comp.center = 0.3;
    comp.width = 0.08;
    spec.components.push_back(comp);
    const AlgebraElement U = build_initial_condition(spec, grid, 0.0);
    const auto exact = SpectralField::sampled(grid, [](double x) {
      double v = 0.0;
      for (int m = -3; m <= 3; ++m) v += 1.2 * std::exp(-std::pow(x - 0.3 + m, 2) / (2 * 0.08 * 0.08));
      return v;
    });
    // band-limited to n/3 = 21; the dropped tail is below 1e-10 for this width
    CHECK(max_diff(U.u, exact) < 1e-10);
    CHECK(tail_energy_fraction(U.u) == 0.0);
  }
  SUBCASE("out-of-band terms are rejected") {
    InitialConditionSpec spec;
    InitialComponent comp;
    comp.kind = InitialComponent::Kind::fourier_list;
    comp.u_terms.push_back({22, 1.0, 0.0});
    spec.components.push_back(comp);
    CHECK_THROWS_AS(build_initial_condition(spec, grid, 0.0), ConfigError);
  }
}
