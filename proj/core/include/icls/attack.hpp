#pragma once

#include <array>
#include <string_view>

#include "icls/channel.hpp"
#include "icls/deployment.hpp"
#include "icls/frame.hpp"

namespace icls {

// The five transmission cases: no attacker, conventional jamming and
// spoofing, and the two frame-coupled attacks (beacon-synchronized noise
// burst, amplify-and-forward relaying).
enum class AttackCase { NoAttack, Jamming, Spoofing, BeaconSync, RelayAF };

enum class SyncMode { FullFrame, BeaconOnly };

struct AttackScenario {
  AttackCase case_id = AttackCase::NoAttack;
  double attacker_power_dbm = 20.0;
  Position2D attacker_pos{11.0, 0.0};
  AfGainPolicy af_gain_policy = AfGainPolicy::FixedOutputPower;

  SyncMode sync() const {
    return case_id == AttackCase::BeaconSync ? SyncMode::BeaconOnly
                                             : SyncMode::FullFrame;
  }
};

// CLI/config names: none | jam | spoof | beacon_sync | relay_af.
std::string_view case_name(AttackCase c);
AttackCase case_from_name(std::string_view name);  // throws on unknown name

// One anchor's receive window covering a whole frame, with partition slices.
struct AnchorObservation {
  CplxVec samples;
  FrameLayout layout;
  CplxVec beacon_ref;  // transmitted beacon symbols (public pattern)

  std::span<const Cplx> beacon() const;
  std::span<const Cplx> header() const;
  std::span<const Cplx> payload() const;
};

// The attacker's baseband waveform aligned to the frame, normalized to unit
// average transmit energy (the attacker->anchor link applies the 20 dBm).
//   Jamming:    complex Gaussian noise over the full frame
//   Spoofing:   a forged frame (known beacon + random data) at a random
//               cyclic symbol offset, modeling an unsynchronized stream
//   BeaconSync: unit-power noise in the beacon slots only, zeros elsewhere
//   RelayAF:    the leg-1 capture renormalized by the fixed AF gain
//   NoAttack:   all zeros
// expected_rx_dbm_at_attacker is the link-budget receive power the fixed AF
// gain is referenced to (ignored by the other cases).
CplxVec attacker_waveform(const AttackScenario& scenario,
                          const ModulatedFrame& legit_frame,
                          const CplxVec& target_rx_at_attacker,
                          double expected_rx_dbm_at_attacker, Rng& rng);

// Per-anchor superposition of the legitimate link, the attacker's
// contribution and one AWGN realization. Fading and shadowing are drawn
// independently per link; the relay path runs target->attacker->anchor with
// two fading draws per anchor path. All randomness derives from a single
// value drawn from rng, so identical generator states yield bit-identical
// observations and attacker_contribution() reproduces exactly the attacker
// part of the superposition.
std::array<AnchorObservation, kNumCells> observe_at_anchors(
    const Deployment& deployment, const ModulatedFrame& legit_frame,
    const AttackScenario& scenario, const ChannelParams& params,
    double target_power_dbm, Rng& rng);

// The attacker-only signal at each anchor (no direct path, no anchor noise).
std::array<CplxVec, kNumCells> attacker_contribution(
    const Deployment& deployment, const ModulatedFrame& legit_frame,
    const AttackScenario& scenario, const ChannelParams& params,
    double target_power_dbm, Rng& rng);

}  // namespace icls
