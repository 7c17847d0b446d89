#include "memsnn/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace memsnn {

double SpikeTrain::waveform_at(size_t row, double t) const {
  const double on = onsets[row];
  if (!std::isfinite(on)) return 0.0;
  const double dt = t - on;
  if (dt <= 0.0 || dt >= shape.width()) return 0.0;
  if (dt < shape.rise) return shape.amplitude * dt / shape.rise;
  return shape.amplitude * (1.0 - (dt - shape.rise) / shape.fall);
}

double SpikeTrain::threshold_time(size_t row, double level) const {
  const double on = onsets[row];
  if (!std::isfinite(on) || level > shape.amplitude) return kNoSpike;
  if (level <= 0.0) return on;
  return on + shape.rise * (level / shape.amplitude);
}

double SpikeTrain::last_support_end() const {
  double end = 0.0;
  for (double on : onsets)
    if (std::isfinite(on)) end = std::max(end, on + shape.width());
  return end;
}

std::vector<double> minmax_scale(const std::vector<double>& x,
                                 const std::vector<double>& mins,
                                 const std::vector<double>& maxs, double T) {
  if (x.size() != mins.size() || x.size() != maxs.size())
    throw std::invalid_argument("minmax_scale: size mismatch");
  static bool warned = false;
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double span = maxs[i] - mins[i];
    if (span <= 0.0) {
      if (!warned) {
        std::cerr << "warning: degenerate feature column (min == max), mapping to T/2\n";
        warned = true;
      }
      out[i] = 0.5 * T;
      continue;
    }
    out[i] = std::clamp((x[i] - mins[i]) / span, 0.0, 1.0) * T;
  }
  return out;
}

std::vector<double> grf_expand(const std::vector<double>& x_scaled,
                               const GrfConfig& cfg, double T) {
  if (cfg.n2 < 2) throw std::invalid_argument("grf_expand: n2 must be >= 2");
  const double sigma = T / (cfg.beta * (cfg.n2 - 1));
  std::vector<double> out;
  out.reserve(x_scaled.size() * cfg.n2);
  for (double x : x_scaled) {
    for (int k = 0; k < cfg.n2; ++k) {
      const double mu = k * T / (cfg.n2 - 1);
      const double d = x - mu;
      out.push_back(T * std::exp(-d * d / (2.0 * sigma * sigma)));
    }
  }
  return out;
}

SpikeTrain encode_temporal(const std::vector<double>& values,
                           const SpikeShape& shape, double T) {
  SpikeTrain tr;
  tr.shape = shape;
  tr.window_T = T;
  tr.onsets.resize(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    const double v = std::clamp(values[i], 0.0, T);
    tr.onsets[i] = T - v;
  }
  return tr;
}

SpikeTrain encode_pattern(const std::vector<uint8_t>& bits, double lead,
                          double t0, const SpikeShape& shape, double T) {
  if (t0 + lead > T) throw std::invalid_argument("encode_pattern: white onset beyond window T");
  SpikeTrain tr;
  tr.shape = shape;
  tr.window_T = T;
  tr.onsets.resize(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) tr.onsets[i] = bits[i] ? t0 : t0 + lead;
  return tr;
}

std::vector<uint8_t> flip_noise(const std::vector<uint8_t>& bits,
                                double fraction, std::mt19937_64& rng) {
  if (fraction < 0.0 || fraction > 1.0) throw std::invalid_argument("flip_noise: fraction outside [0, 1]");
  const size_t count = static_cast<size_t>(std::llround(fraction * static_cast<double>(bits.size())));
  std::vector<size_t> idx(bits.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  // Partial Fisher-Yates: the first `count` entries are a uniform sample
  // of distinct pixel indices.
  for (size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::vector<uint8_t> out = bits;
  for (size_t i = 0; i < count; ++i) out[idx[i]] ^= 1;
  return out;
}

}  // namespace memsnn
