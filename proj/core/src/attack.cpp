#include "icls/attack.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace icls {

namespace {

// Substream tags: the legitimate links, the anchor noise and the attacker
// draws run on separate generators derived from one base value, so a
// no-attack observation and the attacker contribution generated separately
// superpose bit-exactly.
enum StreamTag : std::uint64_t {
  kTagLegit = 1,
  kTagNoise = 2,
  kTagAttackerWave = 3,
  kTagAttackerLink = 4,
};

CplxVec gaussian_burst(std::size_t total, std::size_t lo, std::size_t hi,
                       Rng& rng) {
  std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
  CplxVec out(total, Cplx{0.0, 0.0});
  for (std::size_t i = lo; i < hi && i < total; ++i) {
    double re = dist(rng);
    double im = dist(rng);
    out[i] = Cplx(re, im);
  }
  return out;
}

std::array<CplxVec, kNumCells> attacker_signals(
    const Deployment& deployment, const ModulatedFrame& legit_frame,
    const AttackScenario& scenario, const ChannelParams& params,
    double target_power_dbm, std::uint64_t base) {
  std::array<CplxVec, kNumCells> atk{};
  const std::size_t total = legit_frame.layout.total_symbols();
  if (scenario.case_id == AttackCase::NoAttack) {
    for (auto& v : atk) v.assign(total, Cplx{0.0, 0.0});
    return atk;
  }

  const Position2D target = deployment.candidates[deployment.target_cell];
  const double d1 = distance(target, scenario.attacker_pos);

  // One generator covers the leg-1 capture and the waveform draws, another
  // the six attacker->anchor links in anchor order.
  Rng wave_rng = derive_rng(base, {kTagAttackerWave});

  CplxVec leg1_rx;
  double expected_rx_dbm = 0.0;
  if (scenario.case_id == AttackCase::RelayAF) {
    const CplxVec symbols = legit_frame.symbols();
    leg1_rx = apply_link(symbols, target_power_dbm, d1, params, wave_rng,
                         /*add_noise=*/true)
                  .received_symbols;
    expected_rx_dbm =
        mw_to_dbm(dbm_to_mw(target_power_dbm - path_loss_db(d1, params)) +
                  dbm_to_mw(params.noise_power_dbm));
  }

  const CplxVec wave = attacker_waveform(scenario, legit_frame, leg1_rx,
                                         expected_rx_dbm, wave_rng);

  Rng links_rng = derive_rng(base, {kTagAttackerLink});
  for (std::size_t a = 0; a < kNumCells; ++a) {
    const double d2 = distance(scenario.attacker_pos, deployment.anchors[a]);
    atk[a] = apply_link(wave, scenario.attacker_power_dbm, d2, params, links_rng,
                        /*add_noise=*/false)
                 .received_symbols;
  }
  return atk;
}

}  // namespace

std::string_view case_name(AttackCase c) {
  switch (c) {
    case AttackCase::NoAttack: return "none";
    case AttackCase::Jamming: return "jam";
    case AttackCase::Spoofing: return "spoof";
    case AttackCase::BeaconSync: return "beacon_sync";
    case AttackCase::RelayAF: return "relay_af";
  }
  return "none";
}

AttackCase case_from_name(std::string_view name) {
  if (name == "none") return AttackCase::NoAttack;
  if (name == "jam") return AttackCase::Jamming;
  if (name == "spoof") return AttackCase::Spoofing;
  if (name == "beacon_sync") return AttackCase::BeaconSync;
  if (name == "relay_af") return AttackCase::RelayAF;
  throw std::invalid_argument("unknown attack case: " + std::string(name));
}

std::span<const Cplx> AnchorObservation::beacon() const {
  return {samples.data(), layout.beacon_symbols()};
}
std::span<const Cplx> AnchorObservation::header() const {
  return {samples.data() + layout.beacon_symbols(), layout.header_symbols()};
}
std::span<const Cplx> AnchorObservation::payload() const {
  return {samples.data() + layout.beacon_symbols() + layout.header_symbols(),
          layout.payload_symbols()};
}

CplxVec attacker_waveform(const AttackScenario& scenario,
                          const ModulatedFrame& legit_frame,
                          const CplxVec& target_rx_at_attacker,
                          double expected_rx_dbm_at_attacker, Rng& rng) {
  const FrameLayout& layout = legit_frame.layout;
  const std::size_t total = layout.total_symbols();

  switch (scenario.case_id) {
    case AttackCase::NoAttack:
      return CplxVec(total, Cplx{0.0, 0.0});

    case AttackCase::Jamming:
      return gaussian_burst(total, 0, total, rng);

    case AttackCase::BeaconSync:
      // Noise occupying the beacon slots only.
      return gaussian_burst(total, 0, layout.beacon_symbols(), rng);

    case AttackCase::Spoofing: {
      // Forged frame reusing the public beacon, with random data bits and a
      // random cyclic symbol offset (a continuous unsynchronized stream).
      ModulatedFrame forged =
          build_frame(legit_frame.tx_bits.beacon,
                      random_bits(layout.header_bits, rng),
                      random_bits(layout.payload_bits, rng), layout);
      CplxVec symbols = forged.symbols();
      std::uniform_int_distribution<std::size_t> off_dist(0, total - 1);
      const std::size_t off = off_dist(rng);
      CplxVec out(total);
      for (std::size_t i = 0; i < total; ++i) out[(i + off) % total] = symbols[i];
      return out;
    }

    case AttackCase::RelayAF: {
      if (target_rx_at_attacker.empty())
        throw std::invalid_argument(
            "attacker_waveform: relay case needs the leg-1 capture");
      const double gain =
          1.0 / std::sqrt(dbm_to_mw(expected_rx_dbm_at_attacker));
      CplxVec out = target_rx_at_attacker;
      for (auto& s : out) s *= gain;
      return out;
    }
  }
  return CplxVec(total, Cplx{0.0, 0.0});
}

std::array<AnchorObservation, kNumCells> observe_at_anchors(
    const Deployment& deployment, const ModulatedFrame& legit_frame,
    const AttackScenario& scenario, const ChannelParams& params,
    double target_power_dbm, Rng& rng) {
  const std::uint64_t base = rng();
  const CplxVec symbols = legit_frame.symbols();
  const Position2D target = deployment.candidates[deployment.target_cell];

  std::array<AnchorObservation, kNumCells> obs{};
  Rng legit_rng = derive_rng(base, {kTagLegit});
  for (std::size_t a = 0; a < kNumCells; ++a) {
    const double d = distance(target, deployment.anchors[a]);
    obs[a].samples = apply_link(symbols, target_power_dbm, d, params, legit_rng,
                                /*add_noise=*/false)
                         .received_symbols;
    obs[a].layout = legit_frame.layout;
    obs[a].beacon_ref = legit_frame.beacon;
  }

  if (scenario.case_id != AttackCase::NoAttack) {
    const auto atk = attacker_signals(deployment, legit_frame, scenario, params,
                                      target_power_dbm, base);
    for (std::size_t a = 0; a < kNumCells; ++a)
      for (std::size_t i = 0; i < obs[a].samples.size(); ++i)
        obs[a].samples[i] += atk[a][i];
  }

  Rng noise_rng = derive_rng(base, {kTagNoise});
  for (std::size_t a = 0; a < kNumCells; ++a)
    add_awgn(obs[a].samples, params.noise_power_dbm, noise_rng);
  return obs;
}

std::array<CplxVec, kNumCells> attacker_contribution(
    const Deployment& deployment, const ModulatedFrame& legit_frame,
    const AttackScenario& scenario, const ChannelParams& params,
    double target_power_dbm, Rng& rng) {
  const std::uint64_t base = rng();
  return attacker_signals(deployment, legit_frame, scenario, params,
                          target_power_dbm, base);
}

}  // namespace icls
