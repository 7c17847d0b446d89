#include "memsnn/circuit.hpp"

#include <cmath>
#include <stdexcept>

namespace memsnn {

double RcLatch::pulse_width() const {
  return R * C * std::log(v_src / (v_src - v_switch));
}

bool lif_step(LifState& s, double I_in, double I_bias, bool inhibited, double dt) {
  if (inhibited) {
    s.v_m = s.v_rest;
    return false;
  }
  s.v_m += dt * ((I_in + I_bias) / s.C_m - (s.v_m - s.v_rest) / (s.R_leak * s.C_m));
  if (s.v_m >= s.v_th) {
    s.v_m = s.v_rest;
    return true;
  }
  return false;
}

Crossbar::Crossbar(size_t n_, size_t m_, const MemristorParams& nominal)
    : n(n_), m(m_) {
  if (n == 0 || m == 0) throw std::invalid_argument("crossbar: dimensions must be positive");
  dev.assign(n * m, MemristorState{nominal.w_max(), false});
  par.assign(n * m, nominal);
  col_active.assign(m, 1);
  row_mode.assign(n, RowMode::SPIKE);
}

std::vector<double> crossbar_currents(const Crossbar& xb,
                                      const std::vector<double>& row_voltages) {
  if (row_voltages.size() != xb.n) throw std::invalid_argument("crossbar_currents: row voltage size mismatch");
  std::vector<double> I(xb.m, 0.0);
  for (size_t i = 0; i < xb.n; ++i) {
    if (xb.row_mode[i] != RowMode::SPIKE) continue;
    const double v = row_voltages[i];
    if (v == 0.0) continue;
    const size_t base = i * xb.m;
    for (size_t j = 0; j < xb.m; ++j) {
      if (!xb.col_active[j]) continue;
      I[j] += v * conductance(xb.dev[base + j], xb.par[base + j]);
    }
  }
  for (size_t j = 0; j < xb.m; ++j) I[j] *= xb.col_gain;
  return I;
}

LicOutput lic_step(RcLatch& lic, bool any_post_spike, double dt) {
  if (any_post_spike) lic.trigger();
  else lic.relax(dt);
  return {lic.output_high(), lic.v_c};
}

bool scc_step(RcLatch& scc, bool post_spike, bool inh_high, double dt) {
  if (post_spike) scc.trigger();
  else scc.relax(dt);
  const bool post_latched = scc.output_high();
  return post_latched || !inh_high;
}

bool dcc_step(RcLatch& dcc, bool pre_event, bool inh_high, double dt) {
  if (pre_event) dcc.trigger();
  else dcc.relax(dt);
  const bool pre_latched = dcc.output_high();
  return !(pre_latched && inh_high);
}

double ucc_output(double v_c_u, double v_c_inh, const UccParams& p, bool* tie) {
  if (tie) *tie = (v_c_u == v_c_inh);
  return v_c_u > v_c_inh ? p.v_plus : p.v_minus;
}

void crossbar_apply_update(Crossbar& xb, const std::vector<double>& row_update_v,
                           const std::vector<double>& row_spike_v, double dt) {
  if (row_update_v.size() != xb.n || row_spike_v.size() != xb.n)
    throw std::invalid_argument("crossbar_apply_update: row voltage size mismatch");
  for (size_t i = 0; i < xb.n; ++i) {
    const bool updating = xb.row_mode[i] == RowMode::UPDATE;
    const double v = updating ? row_update_v[i] : row_spike_v[i];
    if (v == 0.0) continue;
    const size_t base = i * xb.m;
    for (size_t j = 0; j < xb.m; ++j) {
      if (!xb.col_active[j]) continue;
      const MemristorParams& pp = xb.par[base + j];
      if (v <= pp.V_T_pos && v >= pp.V_T_neg) continue;  // exact no-op, skip
      xb.dev[base + j] = step_device(xb.dev[base + j], v, dt, pp);
    }
  }
}

}  // namespace memsnn
