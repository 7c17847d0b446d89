#include "memsnn/device.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memsnn {

void MemristorParams::validate() const {
  if (!(D > 0.0) || !(mu_v > 0.0)) throw std::invalid_argument("device: D and mu_v must be positive");
  if (!(R_on > 0.0) || !(R_on < R_off)) throw std::invalid_argument("device: need 0 < R_on < R_off");
  if (!(V_T_neg < 0.0) || !(V_T_pos > 0.0)) throw std::invalid_argument("device: need V_T_neg < 0 < V_T_pos");
  if (!(i_on > 0.0) || !(i_off > 0.0)) throw std::invalid_argument("device: i_on and i_off must be positive");
  if (p < 1) throw std::invalid_argument("device: window exponent p must be >= 1");
  if (!(delta_frac > 0.0) || !(delta_frac < 0.5)) throw std::invalid_argument("device: delta_frac must be in (0, 0.5)");
}

double window_fn(double w, const MemristorParams& p) {
  const double y = 2.0 * w / p.D - 1.0;
  double y2p = y * y;
  for (int k = 1; k < p.p; ++k) y2p *= y * y;
  return 1.0 - y2p;
}

double memristance(const MemristorState& s, const MemristorParams& p) {
  const double x = s.w / p.D;
  return p.R_on * x + p.R_off * (1.0 - x);
}

double conductance(const MemristorState& s, const MemristorParams& p) {
  return 1.0 / memristance(s, p);
}

MemristorState step_device(const MemristorState& s, double v, double dt,
                           const MemristorParams& p) {
  if (!std::isfinite(v)) throw std::invalid_argument("step_device: non-finite voltage");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step_device: dt must be positive");
  if (s.stuck) return s;
  if (v <= p.V_T_pos && v >= p.V_T_neg) return s;  // sub-threshold: exactly no drift

  const double i = v / memristance(s, p);
  const double k = p.mu_v * p.R_on / p.D;
  double dw;
  if (v > p.V_T_pos) {
    dw = k * (p.i_off / (i - p.i_0)) * window_fn(s.w, p);
  } else {
    dw = k * (i / p.i_on) * window_fn(s.w, p);
  }
  // dw/dt has a pole at i = i_0 on the positive branch; cap the step so a
  // single dt cannot jump across the whole device.
  double step = dw * dt;
  const double cap = 0.02 * p.D;
  step = std::clamp(step, -cap, cap);

  MemristorState out = s;
  out.w = std::clamp(s.w + step, p.w_min(), p.w_max());
  return out;
}

MemristorParams perturb_params(const MemristorParams& nominal,
                               double dispersion_R, double dispersion_Vt,
                               std::mt19937_64& rng) {
  std::normal_distribution<double> nr(0.0, 1.0);
  MemristorParams out = nominal;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    out.R_on = nominal.R_on * (1.0 + dispersion_R * nr(rng));
    out.R_off = nominal.R_off * (1.0 + dispersion_R * nr(rng));
    out.V_T_pos = nominal.V_T_pos * (1.0 + dispersion_Vt * nr(rng));
    out.V_T_neg = nominal.V_T_neg * (1.0 + dispersion_Vt * nr(rng));
    if (out.R_on > 0.0 && out.R_on < out.R_off && out.V_T_pos > 0.0 && out.V_T_neg < 0.0)
      return out;
  }
  throw std::runtime_error("perturb_params: could not draw valid parameters");
}

}  // namespace memsnn
