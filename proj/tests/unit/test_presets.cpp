#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "valvelab/error.hpp"
#include "valvelab/presets.hpp"

using namespace valvelab;

TEST(Presets, EightNamedValves) {
  const auto names = plant::preset_names();
  ASSERT_EQ(names.size(), 8u);
  EXPECT_EQ(names.front(), "valve0");
  EXPECT_EQ(names.back(), "valve7");
  EXPECT_THROW(plant::builtin_preset("valve8"), ConfigError);
}

TEST(Presets, ParametersWithinDocumentedEnvelope) {
  double others = 0.0;
  for (const auto& name : plant::preset_names()) {
    const auto p = plant::builtin_preset(name);
    EXPECT_NO_THROW(p.validate());
    EXPECT_GE(p.time_constant(), 0.1) << name;
    EXPECT_LE(p.time_constant(), 1.0) << name;
    EXPECT_LT(p.dc_gain(), 0.0) << name;
    EXPECT_NE(p.coulomb_open, p.coulomb_close) << name;
    EXPECT_GE(p.stiction_ratio, 1.0) << name;
    if (name != "valve0") {
      others += p.dc_gain() / 7.0;
      EXPECT_NEAR(p.time_constant(), 0.29, 0.2 * 0.29 + 1e-12) << name;
      EXPECT_NEAR(p.spring_stiffness, 1.0, 0.2) << name;
    }
  }
  const double ratio = plant::builtin_preset("valve0").dc_gain() / others;
  EXPECT_GT(ratio, 1.6);
  EXPECT_LT(ratio, 2.4);
}

TEST(Presets, DistinctAndReproducible) {
  const auto a = plant::builtin_preset("valve3");
  const auto b = plant::builtin_preset("valve3");
  EXPECT_EQ(a.motor_gain, b.motor_gain);
  EXPECT_NE(a.motor_gain, plant::builtin_preset("valve4").motor_gain);
  EXPECT_EQ(a.rng_seed, 1003u);
}

TEST(Presets, TextRoundTripIsExact) {
  for (const auto& name : plant::preset_names()) {
    const auto p = plant::builtin_preset(name);
    const auto q = plant::parse_preset(plant::format_preset(p));
    EXPECT_EQ(plant::format_preset(q), plant::format_preset(p));
    EXPECT_EQ(q.viscous_coeff, p.viscous_coeff);
  }
}

TEST(Presets, ParseRejectsUnknownKeysWithLineNumber) {
  try {
    plant::parse_preset("motor_gain = 1.5\n# comment\nspring_tension = 2\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(plant::parse_preset("motor_gain 1.5\n"), ConfigError);
  EXPECT_THROW(plant::parse_preset("motor_gain = fast\n"), ConfigError);
  EXPECT_THROW(plant::parse_preset("stiction_ratio = 0.2\n"), ConfigError);
  const auto p = plant::parse_preset("motor_gain = 1.5   # stronger motor\n");
  EXPECT_EQ(p.motor_gain, 1.5);
  EXPECT_EQ(p.spring_rest_angle, plant::ValveParams{}.spring_rest_angle);
}

TEST(Presets, ResolveFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "valvelab_preset_test.txt";
  {
    std::ofstream out(path);
    out << "coulomb_open = 0\ncoulomb_close = 0\n";
  }
  const auto p = plant::resolve_preset(path.string());
  EXPECT_EQ(p.coulomb_open, 0.0);
  std::filesystem::remove(path);
  EXPECT_THROW(plant::resolve_preset(path.string()), ConfigError);
}

TEST(Presets, SetParameter) {
  plant::ValveParams p;
  plant::set_parameter(p, "adc_bits", "0");
  EXPECT_EQ(p.adc_bits, 0);
  EXPECT_THROW(plant::set_parameter(p, "adc_bits", "1.5"), ConfigError);
  EXPECT_THROW(plant::set_parameter(p, "rng_seed", "-4"), ConfigError);
  EXPECT_THROW(plant::set_parameter(p, "nope", "1"), ConfigError);
  EXPECT_EQ(plant::parameter_keys().size(), 13u);
}
