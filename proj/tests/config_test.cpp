#include <doctest.h>

#include "icls/config.hpp"

using namespace icls;

TEST_SUITE("config") {

TEST_CASE("empty text yields the full default configuration") {
  const ExperimentConfig cfg = parse_config("");
  CHECK(cfg.target_powers_dbm == std::vector<double>{-5.0, 0.0, 5.0, 10.0});
  CHECK(cfg.attacker_power_dbm == 20.0);
  CHECK(cfg.frames_per_point == 2000);
  CHECK(cfg.windows_per_point == 200);
  CHECK(cfg.frame.beacon_bits == 8);
  CHECK(cfg.frame.header_bits == 8);
  CHECK(cfg.frame.payload_bits == 96);
  CHECK(cfg.channel.carrier_hz == 2.45e9);
  CHECK(cfg.channel.bandwidth_hz == 1e6);
  CHECK(cfg.channel.noise_power_dbm == -90.0);
  CHECK(cfg.detector.threshold == 0.008);
  CHECK(cfg.threshold_auto);
  CHECK(cfg.detector.window_frames == 100);
  CHECK(cfg.detector.layout.bins == 32);
  CHECK(cfg.cases.size() == 5);
}

TEST_CASE("the rendered default config parses back to the defaults") {
  const ExperimentConfig a = parse_config("");
  const ExperimentConfig b = parse_config(default_config_text());
  CHECK(a.channel.path_loss_exponent == b.channel.path_loss_exponent);
  CHECK(a.channel.shadowing_sigma_db == b.channel.shadowing_sigma_db);
  CHECK(a.deployment.ring_radius_m == b.deployment.ring_radius_m);
  CHECK(a.deployment.candidate_offset_m == b.deployment.candidate_offset_m);
  CHECK(a.target_powers_dbm == b.target_powers_dbm);
  CHECK(a.detector.layout.bins == b.detector.layout.bins);
  CHECK(a.cases == b.cases);
  CHECK(a.roc_thresholds == b.roc_thresholds);
  CHECK(b.deployment.attacker_x_m.value_or(-1) == 11.0);
}

TEST_CASE("values are applied") {
  const ExperimentConfig cfg = parse_config(
      "[channel]\n"
      "path_loss_exponent = 2.0\n"
      "fading = none\n"
      "[deployment]\n"
      "ring_radius_m = 7.5\n"
      "attacker_x_m = 3.25\n"
      "[experiment]\n"
      "target_powers_dbm = 1, 2.5\n"
      "cases = none, relay_af\n"
      "master_seed = 99\n");
  CHECK(cfg.channel.path_loss_exponent == 2.0);
  CHECK(cfg.channel.fading == Fading::None);
  CHECK(cfg.deployment.ring_radius_m == 7.5);
  CHECK(cfg.deployment.attacker_x_m.value_or(0) == 3.25);
  CHECK(cfg.target_powers_dbm == std::vector<double>{1.0, 2.5});
  CHECK(cfg.cases == std::vector<AttackCase>{AttackCase::NoAttack, AttackCase::RelayAF});
  CHECK(cfg.master_seed == 99);
}

TEST_CASE("comments and blank lines are ignored") {
  const ExperimentConfig cfg = parse_config(
      "# leading comment\n"
      "\n"
      "[experiment]  ; section\n"
      "master_seed = 7   # trailing comment\n");
  CHECK(cfg.master_seed == 7);
}

TEST_CASE("constraint violations name the key") {
  try {
    parse_config("[channel]\npath_loss_exponent = -1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("path_loss_exponent") != std::string::npos);
  }
}

TEST_CASE("unknown keys, sections and malformed lines fail with the line number") {
  try {
    parse_config("[channel]\nfoo = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("foo") != std::string::npos);
    CHECK(what.find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("[nosuch]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("orphan = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[channel\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[channel]\nnoise_power_dbm\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[channel]\nnoise_power_dbm = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[channel]\nnoise_power_dbm = -90x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[channel]\nfading = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\ncases = none, dragon\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nframes_per_point = -4\n"), ConfigError);
}

TEST_CASE("threshold accepts auto or a number") {
  const ExperimentConfig a = parse_config("[detector]\nthreshold = auto\n");
  CHECK(a.threshold_auto);
  const ExperimentConfig b = parse_config("[detector]\nthreshold = 0.02\n");
  CHECK_FALSE(b.threshold_auto);
  CHECK(b.detector.threshold == 0.02);
  CHECK_THROWS_AS(parse_config("[detector]\nthreshold = -0.1\n"), ConfigError);
}

TEST_CASE("cross-field constraint violations surface as config errors") {
  CHECK_THROWS_AS(parse_config("[experiment]\nframes_per_point = 10\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[frame]\npayload_bits = 95\n"), ConfigError);
}

TEST_CASE("missing config file") {
  CHECK_THROWS_AS(load_config_file("/nonexistent/path/icls.ini"), ConfigError);
}

}  // TEST_SUITE
