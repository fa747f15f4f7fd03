#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "icls/rng.hpp"

namespace icls {

using Cplx = std::complex<double>;
using CplxVec = std::vector<Cplx>;
using BitVector = std::vector<std::uint8_t>;

enum class Modulation { Bpsk, Qam16 };

// Three-partition frame: beacon (sync/ranging), header, payload.
// Default sizing: 8 BPSK beacon bits + 8 BPSK header bits + 96 16-QAM
// payload bits = 40 complex symbols.
struct FrameLayout {
  std::size_t beacon_bits = 8;
  std::size_t header_bits = 8;
  std::size_t payload_bits = 96;
  Modulation beacon_mod = Modulation::Bpsk;
  Modulation header_mod = Modulation::Bpsk;
  Modulation payload_mod = Modulation::Qam16;

  std::size_t beacon_symbols() const;
  std::size_t header_symbols() const;
  std::size_t payload_symbols() const;
  std::size_t total_symbols() const;

  // Throws std::invalid_argument if bit counts do not fit the modulations
  // (16-QAM partitions must be a multiple of 4 bits).
  void validate() const;
};

std::size_t bits_per_symbol(Modulation m);

struct TxBits {
  BitVector beacon;
  BitVector header;
  BitVector payload;
};

struct ModulatedFrame {
  CplxVec beacon;
  CplxVec header;
  CplxVec payload;
  TxBits tx_bits;
  FrameLayout layout;

  // Concatenated beacon | header | payload.
  CplxVec symbols() const;
};

// Antipodal map: 0 -> +1+0j, 1 -> -1+0j. Unit symbol energy.
CplxVec bpsk_modulate(const BitVector& bits);

// Hard decision on the real part; Re >= 0 decides 0 (ties go to 0).
BitVector bpsk_demodulate(std::span<const Cplx> symbols);

// Gray-mapped square 16-QAM on levels {-3,-1,+1,+3}/sqrt(10) so the
// constellation has unit average energy. First two bits select the I level,
// last two the Q level. Throws if the bit count is not a multiple of 4.
CplxVec qam16_modulate(const BitVector& bits);

// Minimum-distance hard decision against the same constellation.
BitVector qam16_demodulate(std::span<const Cplx> symbols);

CplxVec modulate(const BitVector& bits, Modulation m);
BitVector demodulate(std::span<const Cplx> symbols, Modulation m);

// Modulates the three partitions. Bit lengths must match the layout.
ModulatedFrame build_frame(const BitVector& beacon_bits,
                           const BitVector& header_bits,
                           const BitVector& payload_bits,
                           const FrameLayout& layout = {});

// Hamming distance / length. Throws on length mismatch or empty input.
double bit_error_rate(const BitVector& tx, const BitVector& rx);

// Least-squares complex gain fit of received against a known reference,
// <ref, rx> / <ref, ref>. The beacon is the usual reference: it carries a
// fixed public pattern so receivers can derotate header and payload.
Cplx ls_gain_estimate(std::span<const Cplx> received,
                      std::span<const Cplx> reference);

// The fixed beacon pattern shared by transmitter, receivers and (per the
// attack model) the spoofer: 1 0 1 1 0 0 1 0.
const BitVector& default_beacon_pattern();

// The default pattern tiled or truncated to n bits, for non-default layouts.
BitVector tiled_beacon_pattern(std::size_t n_bits);

BitVector random_bits(std::size_t n, Rng& rng);

}  // namespace icls
