#include "icls/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace icls {

namespace {
constexpr double kPowerFloorDbm = -200.0;
}

void ChannelParams::validate() const {
  if (path_loss_exponent <= 0.0)
    throw std::invalid_argument("path_loss_exponent must be positive");
  if (shadowing_sigma_db < 0.0)
    throw std::invalid_argument("shadowing_sigma_db must be non-negative");
  if (reference_distance_m <= 0.0)
    throw std::invalid_argument("reference_distance_m must be positive");
  if (min_distance_m <= 0.0)
    throw std::invalid_argument("min_distance_m must be positive");
  if (carrier_hz <= 0.0 || bandwidth_hz <= 0.0)
    throw std::invalid_argument("carrier_hz and bandwidth_hz must be positive");
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) {
  if (mw <= 0.0) return kPowerFloorDbm;
  double dbm = 10.0 * std::log10(mw);
  return dbm < kPowerFloorDbm ? kPowerFloorDbm : dbm;
}

double mean_power_dbm(std::span<const Cplx> samples) {
  if (samples.empty()) return kPowerFloorDbm;
  double acc = 0.0;
  for (const auto& s : samples) acc += std::norm(s);
  return mw_to_dbm(acc / static_cast<double>(samples.size()));
}

double path_loss_db(double distance_m, const ChannelParams& params) {
  double d = distance_m < params.min_distance_m ? params.min_distance_m : distance_m;
  return params.reference_loss_db +
         10.0 * params.path_loss_exponent *
             std::log10(d / params.reference_distance_m);
}

double shadowing_sample(const ChannelParams& params, Rng& rng) {
  if (params.shadowing_sigma_db <= 0.0) return 0.0;
  std::normal_distribution<double> dist(0.0, params.shadowing_sigma_db);
  return dist(rng);
}

Cplx fading_coefficient(const ChannelParams& params, Rng& rng) {
  if (params.fading == Fading::None) return Cplx(1.0, 0.0);
  std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
  double re = dist(rng);
  double im = dist(rng);
  return Cplx(re, im);
}

void add_awgn(CplxVec& samples, double noise_power_dbm, Rng& rng) {
  const double sigma = std::sqrt(dbm_to_mw(noise_power_dbm) / 2.0);
  std::normal_distribution<double> dist(0.0, sigma);
  for (auto& s : samples) {
    double re = dist(rng);
    double im = dist(rng);
    s += Cplx(re, im);
  }
}

LinkRealization apply_link(std::span<const Cplx> symbols, double tx_power_dbm,
                           double distance_m, const ChannelParams& params,
                           Rng& rng, bool add_noise) {
  LinkRealization link;
  link.shadowing_db = shadowing_sample(params, rng);
  link.fading_coefficient = fading_coefficient(params, rng);
  link.rx_power_dbm =
      tx_power_dbm - path_loss_db(distance_m, params) + link.shadowing_db;

  const Cplx scale =
      std::sqrt(dbm_to_mw(link.rx_power_dbm)) * link.fading_coefficient;
  link.received_symbols.resize(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i)
    link.received_symbols[i] = scale * symbols[i];
  if (add_noise) add_awgn(link.received_symbols, params.noise_power_dbm, rng);
  return link;
}

double af_unit_gain(const Leg& leg1, const ChannelParams& params) {
  const double expected_in_mw =
      dbm_to_mw(leg1.power_dbm - path_loss_db(leg1.distance_m, params)) +
      dbm_to_mw(params.noise_power_dbm);
  return 1.0 / std::sqrt(expected_in_mw);
}

LinkRealization cascade_links(std::span<const Cplx> symbols, const Leg& leg1,
                              AfGainPolicy policy, const Leg& leg2,
                              const ChannelParams& params, Rng& rng,
                              bool add_leg2_noise) {
  (void)policy;  // FixedOutputPower is the only policy
  LinkRealization hop1 = apply_link(symbols, leg1.power_dbm, leg1.distance_m,
                                    params, rng, /*add_noise=*/true);
  const double gain = af_unit_gain(leg1, params);
  for (auto& s : hop1.received_symbols) s *= gain;

  LinkRealization hop2 =
      apply_link(hop1.received_symbols, leg2.power_dbm, leg2.distance_m, params,
                 rng, add_leg2_noise);

  LinkRealization out;
  out.received_symbols = std::move(hop2.received_symbols);
  out.fading_coefficient = hop1.fading_coefficient * hop2.fading_coefficient;
  out.shadowing_db = hop1.shadowing_db + hop2.shadowing_db;
  // Signal-component budget through both hops and the AF renormalization.
  out.rx_power_dbm = leg2.power_dbm - path_loss_db(leg2.distance_m, params) +
                     hop2.shadowing_db +
                     mw_to_dbm(gain * gain * dbm_to_mw(hop1.rx_power_dbm));
  return out;
}

}  // namespace icls
