#include <doctest.h>

#include <cmath>

#include "icls/attack.hpp"
#include "icls/detection.hpp"
#include "icls/experiment.hpp"

using namespace icls;

namespace {

ModulatedFrame test_frame(Rng& rng) {
  return build_frame(default_beacon_pattern(), random_bits(8, rng),
                     random_bits(96, rng));
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.frames_per_point = 1000;
  cfg.windows_per_point = 2;
  cfg.detector.window_frames = 25;
  cfg.detector.baseline_frames = 250;
  return cfg;
}

}  // namespace

TEST_SUITE("attack") {

TEST_CASE("case names round trip") {
  for (AttackCase c : {AttackCase::NoAttack, AttackCase::Jamming,
                       AttackCase::Spoofing, AttackCase::BeaconSync,
                       AttackCase::RelayAF})
    CHECK(case_from_name(case_name(c)) == c);
  CHECK_THROWS_AS(case_from_name("meteor"), std::invalid_argument);
}

TEST_CASE("no-attack waveform is all zeros") {
  Rng rng(51);
  auto frame = test_frame(rng);
  AttackScenario none;
  for (const auto& s : attacker_waveform(none, frame, {}, 0.0, rng))
    CHECK(s == Cplx(0.0, 0.0));
}

TEST_CASE("beacon-synchronized waveform occupies only the beacon slots") {
  Rng rng(52);
  auto frame = test_frame(rng);
  AttackScenario bs;
  bs.case_id = AttackCase::BeaconSync;
  CHECK(bs.sync() == SyncMode::BeaconOnly);
  const CplxVec w = attacker_waveform(bs, frame, {}, 0.0, rng);
  REQUIRE(w.size() == 40);
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK((std::norm(w[i]) > 0.0) == (i < 8));
}

TEST_CASE("jamming waveform spans the frame with near-unit energy") {
  Rng rng(53);
  auto frame = test_frame(rng);
  AttackScenario jam;
  jam.case_id = AttackCase::Jamming;
  double acc = 0.0;
  const int reps = 2000;
  for (int r = 0; r < reps; ++r) {
    const CplxVec w = attacker_waveform(jam, frame, {}, 0.0, rng);
    for (const auto& s : w) acc += std::norm(s);
  }
  CHECK(acc / (reps * 40.0) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("spoofed frames carry the public beacon at some cyclic offset") {
  Rng rng(54);
  auto frame = test_frame(rng);
  AttackScenario spoof;
  spoof.case_id = AttackCase::Spoofing;
  const CplxVec beacon_ref = bpsk_modulate(default_beacon_pattern());
  for (int it = 0; it < 50; ++it) {
    const CplxVec w = attacker_waveform(spoof, frame, {}, 0.0, rng);
    REQUIRE(w.size() == 40);
    bool found = false;
    for (std::size_t off = 0; off < 40 && !found; ++off) {
      bool match = true;
      for (std::size_t k = 0; k < beacon_ref.size() && match; ++k)
        match = std::abs(w[(off + k) % 40] - beacon_ref[k]) < 1e-12;
      found = match;
    }
    CHECK(found);
  }
}

TEST_CASE("relay waveform without impairments is a scaled copy preserving content") {
  Rng rng(55);
  auto frame = test_frame(rng);
  ChannelParams p;
  p.shadowing_sigma_db = 0.0;
  p.fading = Fading::None;
  p.noise_power_dbm = -400.0;

  const double tx = 0.0;
  const double d1 = 3.0;
  auto leg1 = apply_link(frame.symbols(), tx, d1, p, rng);
  AttackScenario relay;
  relay.case_id = AttackCase::RelayAF;
  const double expected_rx =
      mw_to_dbm(dbm_to_mw(tx - path_loss_db(d1, p)) + dbm_to_mw(p.noise_power_dbm));
  const CplxVec w =
      attacker_waveform(relay, frame, leg1.received_symbols, expected_rx, rng);

  // Scaled copy: constant complex ratio against the transmitted symbols.
  const CplxVec sy = frame.symbols();
  const Cplx ratio = w[0] / sy[0];
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK(std::abs(w[i] - ratio * sy[i]) < 1e-9);

  // And the bit content survives demodulation of the relayed waveform.
  CplxVec eq = w;
  for (auto& s : eq) s /= ratio;
  CHECK(bpsk_demodulate(std::span<const Cplx>(eq).subspan(8, 8)) ==
        frame.tx_bits.header);
  CHECK(qam16_demodulate(std::span<const Cplx>(eq).subspan(16, 24)) ==
        frame.tx_bits.payload);
  CHECK_THROWS_AS(attacker_waveform(relay, frame, {}, 0.0, rng),
                  std::invalid_argument);
}

TEST_CASE("superposition: no-attack plus attacker contribution equals the attacked observation") {
  ExperimentConfig cfg = small_config();
  const Deployment dep = cfg.deployment.build();
  Rng frng(56);
  auto frame = test_frame(frng);

  for (AttackCase c : {AttackCase::Jamming, AttackCase::Spoofing,
                       AttackCase::BeaconSync, AttackCase::RelayAF}) {
    AttackScenario scenario;
    scenario.case_id = c;
    scenario.attacker_pos = dep.attacker_pos;
    AttackScenario none;

    Rng r1(1000 + static_cast<int>(c));
    Rng r2(1000 + static_cast<int>(c));
    Rng r3(1000 + static_cast<int>(c));
    auto attacked = observe_at_anchors(dep, frame, scenario, cfg.channel, 0.0, r1);
    auto clean = observe_at_anchors(dep, frame, none, cfg.channel, 0.0, r2);
    auto contrib = attacker_contribution(dep, frame, scenario, cfg.channel, 0.0, r3);

    for (std::size_t a = 0; a < kNumCells; ++a) {
      REQUIRE(attacked[a].samples.size() == clean[a].samples.size());
      for (std::size_t i = 0; i < attacked[a].samples.size(); ++i) {
        const Cplx sum = clean[a].samples[i] + contrib[a][i];
        CHECK(std::abs(attacked[a].samples[i] - sum) <
              1e-12 * (1.0 + std::abs(sum)));
      }
    }
  }
}

TEST_CASE("beacon-sync leaves header and payload samples bit-identical") {
  ExperimentConfig cfg = small_config();
  const Deployment dep = cfg.deployment.build();
  Rng frng(57);
  auto frame = test_frame(frng);
  AttackScenario bs;
  bs.case_id = AttackCase::BeaconSync;
  bs.attacker_pos = dep.attacker_pos;
  AttackScenario none;

  Rng r1(4242), r2(4242);
  auto attacked = observe_at_anchors(dep, frame, bs, cfg.channel, 5.0, r1);
  auto clean = observe_at_anchors(dep, frame, none, cfg.channel, 5.0, r2);
  for (std::size_t a = 0; a < kNumCells; ++a) {
    const auto ah = attacked[a].header();
    const auto ch = clean[a].header();
    for (std::size_t i = 0; i < ah.size(); ++i) CHECK(ah[i] == ch[i]);
    const auto ap = attacked[a].payload();
    const auto cp = clean[a].payload();
    for (std::size_t i = 0; i < ap.size(); ++i) CHECK(ap[i] == cp[i]);
    // The beacon slice must differ (that is where the burst lands).
    bool beacon_differs = false;
    for (std::size_t i = 0; i < attacked[a].beacon().size(); ++i)
      if (attacked[a].beacon()[i] != clean[a].beacon()[i]) beacon_differs = true;
    CHECK(beacon_differs);
  }
}

TEST_CASE("clean high-power link demodulates the header without errors") {
  ExperimentConfig cfg = small_config();
  cfg.channel.shadowing_sigma_db = 0.0;
  cfg.channel.fading = Fading::None;
  cfg.frames_per_point = 200;
  const auto study = localization_study(AttackCase::NoAttack, 10.0, cfg);
  CHECK(study.header_ber == 0.0);
}

TEST_CASE("jamming at 20 dBm against a -5 dBm target breaks the header") {
  // At the serving anchor the jam-to-signal ratio reaches up to ~34 dB
  // (attacker at 1 m from anchor 0 vs the 2 m serving link), so the
  // SINR-driven BER stays far above 0.1 on average.
  ExperimentConfig cfg = small_config();
  const auto study = localization_study(AttackCase::Jamming, -5.0, cfg);
  CHECK(study.header_ber > 0.1);
}

TEST_CASE("relay dominance steers the RSS pattern to the attacker cell") {
  // Link budget: the relay delivers 20 dBm - PL(1 m) = -20.2 dBm at anchor 0
  // while the -5 dBm target delivers at most -54 dBm there; with >= 10 dB
  // dominance at every anchor the argmin must land on the attacker's cell.
  ExperimentConfig cfg = small_config();
  const auto study = localization_study(AttackCase::RelayAF, -5.0, cfg);
  CHECK(study.attacker_cell_rate > 0.9);
}

TEST_CASE("relay keeps communication intact while spoofing breaks it") {
  ExperimentConfig cfg = small_config();
  const auto relay = localization_study(AttackCase::RelayAF, 0.0, cfg);
  const auto spoof = localization_study(AttackCase::Spoofing, 0.0, cfg);
  CHECK(relay.header_ber < 0.01);
  CHECK(spoof.header_ber > 0.05);
}

}  // TEST_SUITE
