#pragma once

#include <span>

#include "icls/frame.hpp"
#include "icls/rng.hpp"

namespace icls {

enum class Fading { None, RayleighFlat };

// Log-distance path loss with lognormal shadowing and optional flat Rayleigh
// block fading (one coefficient per frame). Powers are dBm throughout; a
// complex sample sequence with mean |s|^2 = 1 corresponds to 0 dBm.
struct ChannelParams {
  double path_loss_exponent = 3.0;
  double reference_distance_m = 1.0;
  double reference_loss_db = 40.2;  // free space at 1 m, 2.45 GHz
  double shadowing_sigma_db = 4.0;
  Fading fading = Fading::RayleighFlat;
  double noise_power_dbm = -90.0;
  double carrier_hz = 2.45e9;
  double bandwidth_hz = 1e6;
  double min_distance_m = 1.0;  // distances clamp here before the log

  void validate() const;  // throws std::invalid_argument
};

struct LinkRealization {
  CplxVec received_symbols;
  Cplx fading_coefficient{1.0, 0.0};
  double shadowing_db = 0.0;
  // Ensemble mean over fading: tx - path loss + shadowing.
  double rx_power_dbm = 0.0;
};

double dbm_to_mw(double dbm);
// Guards zero/negative power at a -200 dBm floor.
double mw_to_dbm(double mw);
// 10*log10(mean |s|^2) with the same -200 dBm floor; empty input hits the floor.
double mean_power_dbm(std::span<const Cplx> samples);

double path_loss_db(double distance_m, const ChannelParams& params);

// Zero-mean Gaussian in dB, sigma = shadowing_sigma_db. Sigma 0 returns 0.0
// without consuming randomness.
double shadowing_sample(const ChannelParams& params, Rng& rng);

// RayleighFlat: circularly symmetric complex Gaussian, E[|h|^2] = 1.
// None: exactly 1+0j without consuming randomness.
Cplx fading_coefficient(const ChannelParams& params, Rng& rng);

// Adds i.i.d. complex Gaussian noise of the given per-sample power.
void add_awgn(CplxVec& samples, double noise_power_dbm, Rng& rng);

// One shadowing draw, one fading draw, then per-sample AWGN:
//   out = sqrt(lin(tx - PL + X)) * h * s + n
// Input symbols are expected to have unit average energy. Set add_noise
// false to get the noiseless faded signal (used when several contributions
// superpose at one receiver and noise must be added once).
LinkRealization apply_link(std::span<const Cplx> symbols, double tx_power_dbm,
                           double distance_m, const ChannelParams& params,
                           Rng& rng, bool add_noise = true);

enum class AfGainPolicy { FixedOutputPower };

struct Leg {
  double power_dbm = 0.0;
  double distance_m = 1.0;
};

// Amplitude gain that maps the expected leg-1 receive power (signal plus
// noise floor, no fading term) to unit average energy. Deliberately not a
// per-frame AGC: fading and shadowing pass through to the relayed waveform,
// which is what makes the two-hop envelope statistics distinguishable.
double af_unit_gain(const Leg& leg1, const ChannelParams& params);

// Two-hop amplify-and-forward cascade: leg 1 with receiver noise, fixed-gain
// renormalization, leg 2 at the relay output power. Two independent fading
// draws, so the end-to-end envelope is double-faded. fading_coefficient of
// the result is the product h1*h2 and shadowing_db the sum of both draws.
LinkRealization cascade_links(std::span<const Cplx> symbols, const Leg& leg1,
                              AfGainPolicy policy, const Leg& leg2,
                              const ChannelParams& params, Rng& rng,
                              bool add_leg2_noise = true);

}  // namespace icls
