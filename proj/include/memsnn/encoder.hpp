#pragma once
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace memsnn {

// Triangular voltage pulse applied to a crossbar row. Amplitude stays below
// the device positive threshold so reads never disturb stored state.
struct SpikeShape {
  double amplitude = 1.1;  // V
  double rise = 1e-6;      // s
  double fall = 1e-6;      // s
  double width() const { return rise + fall; }
};

// One presentation: at most one spike per row. Rows that stay quiet carry
// an infinite onset.
struct SpikeTrain {
  std::vector<double> onsets;  // s, per row; +inf = no spike
  SpikeShape shape;
  double window_T = 1e-3;  // encoding window, s

  static constexpr double kNoSpike = std::numeric_limits<double>::infinity();
  size_t rows() const { return onsets.size(); }
  // Instantaneous row voltage at time t.
  double waveform_at(size_t row, double t) const;
  // First time the waveform reaches `level`, +inf if it never does.
  double threshold_time(size_t row, double level) const;
  // End of the last pulse (+row with no spikes -> 0).
  double last_support_end() const;
};

struct GrfConfig {
  int n2 = 3;         // receptive fields per input feature
  double beta = 1.5;  // width divisor: sigma = T / (beta * (n2 - 1))
};

// Min-max scale x into [0, T] using column statistics (mins/maxs from the
// training split); values outside the fitted range clamp. A degenerate
// column (min == max) maps to T/2 and emits one warning on stderr.
std::vector<double> minmax_scale(const std::vector<double>& x,
                                 const std::vector<double>& mins,
                                 const std::vector<double>& maxs, double T);

// Gaussian receptive field expansion of scaled features: feature i yields
// n2 responses r_k = T*exp(-(x - mu_k)^2 / (2 sigma^2)) with centers
// mu_k = (k-1)*T/(n2-1), k = 1..n2.
std::vector<double> grf_expand(const std::vector<double>& x_scaled,
                               const GrfConfig& cfg, double T);

// Larger response -> earlier spike: row onset = T - value.
SpikeTrain encode_temporal(const std::vector<double>& values,
                           const SpikeShape& shape, double T);

// Binary pattern: black pixel spikes at t0, white pixel at t0 + lead.
SpikeTrain encode_pattern(const std::vector<uint8_t>& bits, double lead,
                          double t0, const SpikeShape& shape, double T);

// Invert exactly round(fraction * bits.size()) distinct pixels.
std::vector<uint8_t> flip_noise(const std::vector<uint8_t>& bits,
                                double fraction, std::mt19937_64& rng);

}  // namespace memsnn
