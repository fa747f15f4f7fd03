#include "icls/frame.hpp"

#include <cmath>
#include <stdexcept>

namespace icls {

namespace {

constexpr double kQamScale = 0.31622776601683794;  // 1/sqrt(10)

// Gray code on two bits -> amplitude level: 00 01 11 10 -> -3 -1 +1 +3.
double gray2_to_level(std::uint8_t hi, std::uint8_t lo) {
  if (hi == 0) return lo == 0 ? -3.0 : -1.0;
  return lo == 0 ? 3.0 : 1.0;
}

void level_to_gray2(double v, std::uint8_t& hi, std::uint8_t& lo) {
  // Decision thresholds at -2, 0, +2 (scaled).
  if (v < -2.0 * kQamScale) { hi = 0; lo = 0; return; }
  if (v < 0.0)              { hi = 0; lo = 1; return; }
  if (v < 2.0 * kQamScale)  { hi = 1; lo = 1; return; }
  hi = 1; lo = 0;
}

void check_bits(const BitVector& bits) {
  for (auto b : bits)
    if (b > 1) throw std::invalid_argument("bit values must be 0 or 1");
}

}  // namespace

std::size_t bits_per_symbol(Modulation m) {
  return m == Modulation::Bpsk ? 1 : 4;
}

std::size_t FrameLayout::beacon_symbols() const {
  return beacon_bits / bits_per_symbol(beacon_mod);
}
std::size_t FrameLayout::header_symbols() const {
  return header_bits / bits_per_symbol(header_mod);
}
std::size_t FrameLayout::payload_symbols() const {
  return payload_bits / bits_per_symbol(payload_mod);
}
std::size_t FrameLayout::total_symbols() const {
  return beacon_symbols() + header_symbols() + payload_symbols();
}

void FrameLayout::validate() const {
  auto fits = [](std::size_t bits, Modulation m) {
    return bits % bits_per_symbol(m) == 0;
  };
  if (beacon_bits == 0 || header_bits == 0 || payload_bits == 0)
    throw std::invalid_argument("frame layout: all partitions need at least one bit");
  if (!fits(beacon_bits, beacon_mod) || !fits(header_bits, header_mod) ||
      !fits(payload_bits, payload_mod))
    throw std::invalid_argument(
        "frame layout: partition bit count not a multiple of bits per symbol");
}

CplxVec bpsk_modulate(const BitVector& bits) {
  if (bits.empty()) throw std::invalid_argument("bpsk_modulate: empty input");
  check_bits(bits);
  CplxVec out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i)
    out[i] = Cplx(bits[i] == 0 ? 1.0 : -1.0, 0.0);
  return out;
}

BitVector bpsk_demodulate(std::span<const Cplx> symbols) {
  BitVector out(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i)
    out[i] = symbols[i].real() >= 0.0 ? 0 : 1;
  return out;
}

CplxVec qam16_modulate(const BitVector& bits) {
  if (bits.empty()) throw std::invalid_argument("qam16_modulate: empty input");
  if (bits.size() % 4 != 0)
    throw std::invalid_argument("qam16_modulate: bit count not a multiple of 4");
  check_bits(bits);
  CplxVec out(bits.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint8_t* b = &bits[4 * i];
    out[i] = Cplx(gray2_to_level(b[0], b[1]) * kQamScale,
                  gray2_to_level(b[2], b[3]) * kQamScale);
  }
  return out;
}

BitVector qam16_demodulate(std::span<const Cplx> symbols) {
  BitVector out(symbols.size() * 4);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    std::uint8_t* b = &out[4 * i];
    level_to_gray2(symbols[i].real(), b[0], b[1]);
    level_to_gray2(symbols[i].imag(), b[2], b[3]);
  }
  return out;
}

CplxVec modulate(const BitVector& bits, Modulation m) {
  return m == Modulation::Bpsk ? bpsk_modulate(bits) : qam16_modulate(bits);
}

BitVector demodulate(std::span<const Cplx> symbols, Modulation m) {
  return m == Modulation::Bpsk ? bpsk_demodulate(symbols)
                               : qam16_demodulate(symbols);
}

ModulatedFrame build_frame(const BitVector& beacon_bits,
                           const BitVector& header_bits,
                           const BitVector& payload_bits,
                           const FrameLayout& layout) {
  layout.validate();
  if (beacon_bits.size() != layout.beacon_bits ||
      header_bits.size() != layout.header_bits ||
      payload_bits.size() != layout.payload_bits)
    throw std::invalid_argument("build_frame: bit lengths do not match the layout");
  ModulatedFrame frame;
  frame.layout = layout;
  frame.beacon = modulate(beacon_bits, layout.beacon_mod);
  frame.header = modulate(header_bits, layout.header_mod);
  frame.payload = modulate(payload_bits, layout.payload_mod);
  frame.tx_bits = TxBits{beacon_bits, header_bits, payload_bits};
  return frame;
}

CplxVec ModulatedFrame::symbols() const {
  CplxVec out;
  out.reserve(beacon.size() + header.size() + payload.size());
  out.insert(out.end(), beacon.begin(), beacon.end());
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

double bit_error_rate(const BitVector& tx, const BitVector& rx) {
  if (tx.empty()) throw std::invalid_argument("bit_error_rate: empty input");
  if (tx.size() != rx.size())
    throw std::invalid_argument("bit_error_rate: length mismatch");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < tx.size(); ++i)
    if (tx[i] != rx[i]) ++errors;
  return static_cast<double>(errors) / static_cast<double>(tx.size());
}

Cplx ls_gain_estimate(std::span<const Cplx> received,
                      std::span<const Cplx> reference) {
  if (received.size() != reference.size() || reference.empty())
    throw std::invalid_argument("ls_gain_estimate: size mismatch or empty input");
  Cplx num{0.0, 0.0};
  double den = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    num += std::conj(reference[i]) * received[i];
    den += std::norm(reference[i]);
  }
  if (den == 0.0) throw std::invalid_argument("ls_gain_estimate: zero reference");
  return num / den;
}

const BitVector& default_beacon_pattern() {
  static const BitVector pattern{1, 0, 1, 1, 0, 0, 1, 0};
  return pattern;
}

BitVector tiled_beacon_pattern(std::size_t n_bits) {
  const BitVector& base = default_beacon_pattern();
  BitVector out(n_bits);
  for (std::size_t i = 0; i < n_bits; ++i) out[i] = base[i % base.size()];
  return out;
}

BitVector random_bits(std::size_t n, Rng& rng) {
  BitVector out(n);
  std::uniform_int_distribution<int> coin(0, 1);
  for (auto& b : out) b = static_cast<std::uint8_t>(coin(rng));
  return out;
}

}  // namespace icls
