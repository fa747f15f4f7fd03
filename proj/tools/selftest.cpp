#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cli.hpp"
#include "icls/config.hpp"

namespace icls::cli {

namespace {

struct Check {
  const char* name;
  std::function<void()> fn;  // throws std::runtime_error on failure
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

void expect_near(double got, double want, double tol, const std::string& what) {
  if (!(std::abs(got - want) <= tol))
    throw std::runtime_error(what + ": got " + std::to_string(got) +
                             ", want " + std::to_string(want) + " +/- " +
                             std::to_string(tol));
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

ChannelParams awgn_only() {
  ChannelParams p;
  p.shadowing_sigma_db = 0.0;
  p.fading = Fading::None;
  return p;
}

std::vector<Check> make_checks() {
  return {
      {"bpsk mapping and tie rule",
       [] {
         expect(bpsk_modulate({0})[0] == Cplx(1.0, 0.0), "0 must map to +1");
         expect(bpsk_modulate({1})[0] == Cplx(-1.0, 0.0), "1 must map to -1");
         CplxVec pts{{0.3, -0.9}, {-0.001, 0.0}, {0.0, 5.0}};
         BitVector bits = bpsk_demodulate(pts);
         expect(bits == BitVector({0, 1, 0}), "sign/tie rule");
       }},
      {"bpsk noiseless round trip",
       [] {
         Rng rng(7);
         BitVector bits = random_bits(8, rng);
         expect(bpsk_demodulate(bpsk_modulate(bits)) == bits, "round trip");
       }},
      {"16-qam unit energy and symbol count",
       [] {
         BitVector all;
         for (int v = 0; v < 16; ++v)
           for (int b = 3; b >= 0; --b) all.push_back((v >> b) & 1);
         CplxVec pts = qam16_modulate(all);
         double e = 0.0;
         for (auto& s : pts) e += std::norm(s);
         expect_near(e / 16.0, 1.0, 1e-12, "constellation energy");
         Rng rng(9);
         expect(qam16_modulate(random_bits(96, rng)).size() == 24, "96 bits -> 24 symbols");
       }},
      {"16-qam round trip and decision regions",
       [] {
         Rng rng(11);
         BitVector bits = random_bits(96, rng);
         expect(qam16_demodulate(qam16_modulate(bits)) == bits, "round trip");
         CplxVec p = qam16_modulate({0, 0, 0, 0});
         // Below half the minimum distance the label must survive.
         CplxVec moved{p[0] + Cplx(0.9 / std::sqrt(10.0), -0.9 / std::sqrt(10.0))};
         expect(qam16_demodulate(moved) == BitVector({0, 0, 0, 0}), "decision region");
       }},
      {"16-qam symbol error rate vs analytic oracle",
       [] {
         // Es/N0 = 16 dB through the real link path.
         ChannelParams p = awgn_only();
         const double tx = 16.0 + p.noise_power_dbm + p.reference_loss_db;
         Rng rng(13);
         const std::size_t n_sym = 400000;
         std::size_t errors = 0;
         BitVector bits;
         for (std::size_t i = 0; i < n_sym; i += 1000) {
           bits = random_bits(4000, rng);
           CplxVec sy = qam16_modulate(bits);
           auto link = apply_link(sy, tx, p.reference_distance_m, p, rng);
           CplxVec eq = link.received_symbols;
           for (auto& s : eq) s /= std::sqrt(dbm_to_mw(link.rx_power_dbm));
           for (std::size_t k = 0; k < sy.size(); ++k) {
             BitVector got = qam16_demodulate(CplxVec{eq[k]});
             if (!std::equal(got.begin(), got.end(), bits.begin() + 4 * k))
               ++errors;
           }
         }
         const double es_n0 = std::pow(10.0, 1.6);
         const double p4 = 1.5 * q_function(std::sqrt(0.2 * es_n0));
         const double ser_oracle = 1.0 - (1.0 - p4) * (1.0 - p4);
         const double ser = static_cast<double>(errors) / n_sym;
         expect(std::abs(ser - ser_oracle) / ser_oracle < 0.10,
                "SER " + std::to_string(ser) + " vs oracle " + std::to_string(ser_oracle));
       }},
      {"frame build and bit error rate",
       [] {
         Rng rng(3);
         auto frame = build_frame(default_beacon_pattern(), random_bits(8, rng),
                                  random_bits(96, rng));
         expect(frame.symbols().size() == 40, "40 symbols");
         expect(frame.beacon.size() == 8, "8 beacon symbols");
         expect(frame.tx_bits.beacon == default_beacon_pattern(), "stored bits");
         BitVector a{1, 0, 1, 0, 1, 0, 1, 0}, b = a, c = a;
         for (auto& x : b) x ^= 1;
         c[3] ^= 1;
         expect(bit_error_rate(a, a) == 0.0, "identical -> 0");
         expect(bit_error_rate(a, b) == 1.0, "complement -> 1");
         expect(bit_error_rate(a, c) == 0.125, "1/8 flip");
       }},
      {"bpsk awgn ber at 4 dB vs Q oracle",
       [] {
         ChannelParams p = awgn_only();
         const double tx = 4.0 + p.noise_power_dbm + p.reference_loss_db;
         Rng rng(17);
         const std::size_t n_bits = 1000000;
         std::size_t errors = 0;
         BitVector bits;
         for (std::size_t done = 0; done < n_bits; done += 10000) {
           bits = random_bits(10000, rng);
           CplxVec sy = bpsk_modulate(bits);
           auto link = apply_link(sy, tx, p.reference_distance_m, p, rng);
           BitVector rx = bpsk_demodulate(link.received_symbols);
           for (std::size_t k = 0; k < bits.size(); ++k)
             if (rx[k] != bits[k]) ++errors;
         }
         const double oracle = q_function(std::sqrt(2.0 * std::pow(10.0, 0.4)));
         const double ber = static_cast<double>(errors) / n_bits;
         expect(std::abs(ber - oracle) / oracle < 0.05,
                "BER " + std::to_string(ber) + " vs oracle " + std::to_string(oracle));
       }},
      {"path loss reference, decade rule and Friis",
       [] {
         ChannelParams p;
         expect_near(path_loss_db(p.reference_distance_m, p), p.reference_loss_db,
                     1e-12, "loss at reference distance");
         ChannelParams p2 = p;
         p2.path_loss_exponent = 2.0;
         expect_near(path_loss_db(10.0, p2) - path_loss_db(1.0, p2), 20.0, 1e-12,
                     "decade rule");
         const double friis =
             20.0 * std::log10(4.0 * std::numbers::pi * 1.0 * p.carrier_hz /
                               299792458.0);
         expect_near(p.reference_loss_db, friis, 0.1, "Friis reference");
       }},
      {"shadowing and fading moments",
       [] {
         ChannelParams p;
         Rng rng(23);
         p.shadowing_sigma_db = 0.0;
         expect(shadowing_sample(p, rng) == 0.0, "sigma 0 -> 0");
         p.shadowing_sigma_db = 4.0;
         double sum = 0.0, sq = 0.0;
         const int n = 100000;
         for (int i = 0; i < n; ++i) {
           double x = shadowing_sample(p, rng);
           sum += x;
           sq += x * x;
         }
         expect(std::abs(sum / n) < 0.1, "shadowing mean");
         expect_near(std::sqrt(sq / n), 4.0, 0.1, "shadowing stdev");
         p.fading = Fading::None;
         expect(fading_coefficient(p, rng) == Cplx(1.0, 0.0), "fading none");
         p.fading = Fading::RayleighFlat;
         double e2 = 0.0;
         std::vector<double> mags(n);
         for (int i = 0; i < n; ++i) {
           Cplx h = fading_coefficient(p, rng);
           e2 += std::norm(h);
           mags[i] = std::abs(h);
         }
         expect_near(e2 / n, 1.0, 0.02, "E|h|^2");
         std::nth_element(mags.begin(), mags.begin() + n / 2, mags.end());
         expect_near(mags[n / 2], 0.8326, 0.01, "Rayleigh median");
       }},
      {"link budget and zero-length input",
       [] {
         ChannelParams p = awgn_only();
         p.noise_power_dbm = -400.0;  // effectively off
         Rng rng(29);
         CplxVec ones(16, Cplx(1.0, 0.0));
         auto link = apply_link(ones, 10.0, 10.0, p, rng);
         const double gain = std::abs(link.received_symbols[0]);
         const double want = std::sqrt(dbm_to_mw(10.0 - path_loss_db(10.0, p)));
         expect_near(gain, want, 1e-9, "pure gain scale");
         auto empty = apply_link(CplxVec{}, 10.0, 5.0, p, rng);
         expect(empty.received_symbols.empty(), "zero-length output");
       }},
      {"hex deployment geometry",
       [] {
         Deployment d = hex_deployment(5.0);
         expect_near(distance(d.anchors[0], d.anchors[1]), 5.0, 1e-9,
                     "adjacent anchor spacing equals ring radius");
         for (const auto& a : d.anchors)
           expect_near(distance(a, d.center), 5.0, 1e-9, "anchors on the ring");
         for (std::size_t i = 0; i < kNumCells; ++i)
           expect(distance(d.anchors[i], d.candidates[i]) < 1e-9,
                  "offset 0 co-locates candidates");
         expect_near(distance({0, 0}, {3, 4}), 5.0, 1e-12, "3-4-5 triangle");
       }},
      {"beacon rss scale",
       [] {
         CplxVec ones(8, Cplx(1.0, 0.0));
         CplxVec twos(8, Cplx(2.0, 0.0));
         std::array<std::span<const Cplx>, kNumCells> b{ones, ones, ones,
                                                        ones, ones, ones};
         RssVector r = beacon_rss(b);
         expect_near(r[0], 0.0, 1e-12, "unit magnitude -> 0 dBm");
         b[1] = twos;
         r = beacon_rss(b);
         expect_near(r[1], 20.0 * std::log10(2.0), 1e-9, "+6.02 dB doubling");
       }},
      {"expected fingerprints structure",
       [] {
         Deployment dep = hex_deployment(5.0);
         ChannelParams p;
         FingerprintMap map = expected_fingerprints(dep, p, 0.0);
         // Co-located candidate uses the clamped distance: maximum entry.
         for (std::size_t c = 0; c < kNumCells; ++c)
           for (std::size_t a = 0; a < kNumCells; ++a)
             expect(map.entries[c].rss[c] >= map.entries[c].rss[a],
                    "own anchor has max RSS");
         // Rotating the cell permutes the vector cyclically.
         for (std::size_t a = 0; a < kNumCells; ++a)
           expect_near(map.entries[1].rss[(a + 1) % kNumCells],
                       map.entries[0].rss[a], 1e-9, "cyclic shift");
       }},
      {"grid search exact match and tie rule",
       [] {
         Deployment dep = hex_deployment(12.0, 2.0);
         ChannelParams p;
         FingerprintMap map = expected_fingerprints(dep, p, 0.0);
         auto r = grid_search_localize(map.entries[3].rss, map);
         expect(r.cell_index == 3, "exact match picks cell 3");
         expect(r.score_per_cell[3] == 0.0, "exact match scores 0");
         FingerprintMap two = map;
         two.entries[4] = two.entries[2];  // duplicate fingerprints tie
         auto t = grid_search_localize(two.entries[2].rss, two);
         expect(t.cell_index == 2, "tie resolves to the lower index");
       }},
      {"rss to range inversion",
       [] {
         ChannelParams p;
         expect_near(rss_to_range(10.0 - p.reference_loss_db, 10.0, p),
                     p.reference_distance_m, 1e-12, "inversion at reference");
         ChannelParams p3 = p;
         p3.path_loss_exponent = 3.0;
         const double r1 = rss_to_range(-60.0, 0.0, p3);
         const double r2 = rss_to_range(-63.0, 0.0, p3);
         expect_near(r2 / r1, std::pow(10.0, 0.1), 1e-9, "3 dB -> 10^0.1 ratio");
       }},
      {"trilateration recovery and singularity",
       [] {
         std::vector<Position2D> anchors{{0, 0}, {10, 0}, {0, 10}};
         Position2D truth{1.0, 2.0};
         std::vector<double> ranges;
         for (auto& a : anchors) ranges.push_back(distance(a, truth));
         Position2D est = trilaterate(anchors, ranges);
         expect(distance(est, truth) < 1e-9, "exact recovery");
         std::vector<Position2D> line{{0, 0}, {5, 0}, {10, 0}};
         bool threw = false;
         try {
           trilaterate(line, {1.0, 2.0, 3.0});
         } catch (const SingularGeometry&) {
           threw = true;
         }
         expect(threw, "collinear anchors must raise SingularGeometry");
       }},
      {"knn fingerprinting",
       [] {
         FingerprintMap map;
         for (int i = 0; i < 4; ++i) {
           FingerprintEntry e;
           e.position = {static_cast<double>(i), 0.0};
           e.rss.fill(-40.0 - 10.0 * i);
           map.entries.push_back(e);
         }
         expect(distance(knn_fingerprint(map.entries[2].rss, map, 1, false),
                         map.entries[2].position) < 1e-12,
                "exact match returns the entry");
         RssVector off = map.entries[0].rss;
         off[0] += 0.5;  // no exact match, so the mean applies
         Position2D c = knn_fingerprint(off, map, 4, false);
         expect_near(c.x, 1.5, 1e-12, "k = map size gives the centroid");
         // Distances 1 and 3 in dB space weigh 0.75/0.25.
         RssVector m = map.entries[0].rss;
         FingerprintMap two;
         two.entries = {map.entries[0], map.entries[1]};
         two.entries[0].rss[0] += 1.0;
         two.entries[1].rss = m;
         two.entries[1].rss[0] += 3.0;
         Position2D w = knn_fingerprint(m, two, 2, true);
         expect_near(w.x, 0.25 * two.entries[1].position.x +
                              0.75 * two.entries[0].position.x,
                     1e-12, "inverse-distance weights");
       }},
      {"probability of localization",
       [] {
         expect(probability_of_localization({{1, 1}, {2, 2}}) == 1.0, "all correct");
         expect(probability_of_localization({{1, 1}, {2, 3}}) == 0.5, "half correct");
         bool threw = false;
         try {
           probability_of_localization({});
         } catch (const std::invalid_argument&) {
           threw = true;
         }
         expect(threw, "empty input must throw");
       }},
      {"attacker waveforms",
       [] {
         Rng rng(31);
         auto frame = build_frame(default_beacon_pattern(), random_bits(8, rng),
                                  random_bits(96, rng));
         AttackScenario none;
         CplxVec w = attacker_waveform(none, frame, {}, 0.0, rng);
         for (auto& s : w) expect(s == Cplx(0.0, 0.0), "no-attack contribution is zero");
         AttackScenario bs;
         bs.case_id = AttackCase::BeaconSync;
         w = attacker_waveform(bs, frame, {}, 0.0, rng);
         for (std::size_t i = 0; i < w.size(); ++i)
           expect((std::norm(w[i]) > 0.0) == (i < 8),
                  "beacon-sync energy only in the first 8 slots");
       }},
      {"kl divergence identity, example and non-negativity",
       [] {
         HistogramLayout lay{.bins = 2, .lo = 0.0, .hi = 2.0};
         Histogram p{lay, {0.5, 0.5}};
         Histogram q{lay, {0.25, 0.75}};
         expect(kl_divergence(p, p) == 0.0, "KL(P,P) = 0");
         expect_near(kl_divergence(p, q),
                     0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0), 1e-4,
                     "two-bin example");
         Rng rng(37);
         std::uniform_real_distribution<double> u(0.01, 1.0);
         for (int it = 0; it < 1000; ++it) {
           double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
           Histogram pp{lay, {a / (a + b), b / (a + b)}};
           Histogram qq{lay, {c / (c + d), d / (c + d)}};
           expect(kl_divergence(pp, qq) >= -1e-12, "Gibbs inequality");
         }
       }},
      {"histogram normalization",
       [] {
         Histogram h = empirical_histogram({1.0});
         double sum = 0.0;
         for (double p : h.probabilities) {
           sum += p;
           expect(p >= h.layout.smoothing_floor, "floor respected");
         }
         expect_near(sum, 1.0, 1e-12, "mass sums to one");
       }},
      {"envelope observable self-normalization",
       [] {
         std::vector<CplxVec> window{CplxVec(8, Cplx(0.5, 0.0))};
         auto env = envelope_observable(window);
         for (double v : env) expect_near(v, 1.0, 1e-12, "constant window -> 1");
       }},
      {"power gap boundary",
       [] {
         ComponentStats s;
         s.beacon_power_dbm = -40.0;
         s.header_power_dbm = -40.0;
         expect(!power_gap_detect(s), "gap 0 no flag");
         s.beacon_power_dbm = -30.0;
         expect(power_gap_detect(s), "gap 10 flags");
         s.beacon_power_dbm = -37.0;
         expect(!power_gap_detect(s), "gap exactly at threshold no flag");
       }},
      {"detection rates",
       [] {
         auto r = detection_rates({true, true}, {false, false});
         expect(r.detection_rate == 1.0 && r.false_alarm_rate == 0.0, "1.0/0.0");
         r = detection_rates({true, false}, {true, false, false, false});
         expect(r.detection_rate == 0.5 && r.false_alarm_rate == 0.25, "0.5/0.25");
       }},
      {"config defaults and errors",
       [] {
         ExperimentConfig cfg = parse_config("");
         expect(cfg.target_powers_dbm == std::vector<double>({-5, 0, 5, 10}),
                "default powers");
         expect(cfg.attacker_power_dbm == 20.0, "default attacker power");
         expect(cfg.frame.payload_bits == 96, "default payload bits");
         bool threw = false;
         try {
           parse_config("[channel]\npath_loss_exponent = -1\n");
         } catch (const ConfigError& e) {
           threw = std::string(e.what()).find("path_loss_exponent") !=
                   std::string::npos;
         }
         expect(threw, "negative exponent must name the key");
         threw = false;
         try {
           parse_config("[channel]\nfoo = 1\n");
         } catch (const ConfigError&) {
           threw = true;
         }
         expect(threw, "unknown key must fail");
       }},
      {"sweep shape and determinism (small config)",
       [] {
         ExperimentConfig cfg = parse_config(
             "[experiment]\nframes_per_point = 60\nwindows_per_point = 3\n"
             "target_powers_dbm = 0, 10\n"
             "[detector]\nwindow_frames = 20\nbaseline_frames = 200\n");
         auto rows = sweep(cfg);
         expect(rows.size() == 10, "5 cases x 2 powers");
         expect(results_to_csv(rows) == results_to_csv(sweep(cfg)),
                "identical bytes on identical seed");
       }},
  };
}

}  // namespace

int run_selftest(bool verbose) {
  (void)verbose;
  int failures = 0;
  for (const auto& check : make_checks()) {
    try {
      check.fn();
      std::printf("ok    %s\n", check.name);
    } catch (const std::exception& e) {
      std::printf("FAIL  %s: %s\n", check.name, e.what());
      ++failures;
    }
  }
  std::printf("%s (%d failure%s)\n", failures == 0 ? "selftest passed" : "selftest FAILED",
              failures, failures == 1 ? "" : "s");
  return failures;
}

}  // namespace icls::cli
