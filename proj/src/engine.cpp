#include "memsnn/engine.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace memsnn {
namespace {

using nlohmann::json;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void NetworkConfig::validate() const {
  device.validate();
  require(n > 0 && m > 0, "network: n and m must be positive");
  require(T > 0 && std::isfinite(T), "network: T must be positive and finite");
  require(dt > 0 && dt < T, "network: dt must lie in (0, T)");
  require(C_m > 0 && R_leak > 0, "network: C_m and R_leak must be positive");
  require(v_th > 0, "network: v_th must be positive");
  require(I_b >= 0, "network: I_b must be non-negative");
  require(col_gain > 0, "network: col_gain must be positive");
  require(epochs >= 0, "network: epochs must be non-negative");
  require(sample_duration >= 0, "network: sample_duration must be non-negative");
  require(spike.amplitude > 0 && spike.rise > 0 && spike.fall > 0,
          "network: spike shape values must be positive");
  require(spike.amplitude < device.V_T_pos,
          "network: spike amplitude must stay below the device write threshold");
  require(circuit.v_supply > 0 && circuit.v_switch > 0 &&
              circuit.v_switch < circuit.v_supply,
          "network: inverter switching voltage must lie inside the supply");
  require(circuit.R_inh > 0 && circuit.C_inh > 0 && circuit.R_e > 0 &&
              circuit.C_e > 0 && circuit.R_w > 0 && circuit.C_w > 0 &&
              circuit.R_u > 0 && circuit.C_u > 0,
          "network: latch RC values must be positive");
  require(circuit.spike_trigger > 0 && circuit.spike_trigger <= spike.amplitude,
          "network: spike trigger level must be reachable by the waveform");
  require(circuit.ucc.v_plus > device.V_T_pos,
          "network: potentiating rail must exceed the device write threshold");
  require(circuit.ucc.v_minus < device.V_T_neg,
          "network: depressing rail must undercut the device write threshold");
}

void Network::reset_transient() {
  for (auto& l : lif) l.v_m = l.v_rest;
  lic.reset();
  for (auto& s : scc) s.reset();
  for (auto& d : dcc) d.reset();
  for (auto& u : ucc) u.reset();
  std::fill(xb.col_active.begin(), xb.col_active.end(), uint8_t{1});
  std::fill(xb.row_mode.begin(), xb.row_mode.end(), RowMode::SPIKE);
}

Network make_network(const NetworkConfig& cfg) {
  cfg.validate();
  Network net;
  net.cfg = cfg;
  net.xb = Crossbar(cfg.n, cfg.m, cfg.device);
  net.xb.col_gain = cfg.col_gain;
  LifState lif;
  lif.C_m = cfg.C_m;
  lif.R_leak = cfg.R_leak;
  lif.v_th = cfg.v_th;
  net.lif.assign(cfg.m, lif);
  auto latch = [&](double R, double C) {
    RcLatch l;
    l.v_src = cfg.circuit.v_supply;
    l.v_switch = cfg.circuit.v_switch;
    l.R = R;
    l.C = C;
    l.v_c = l.v_src;
    return l;
  };
  net.lic = latch(cfg.circuit.R_inh, cfg.circuit.C_inh);
  net.scc.assign(cfg.m, latch(cfg.circuit.R_e, cfg.circuit.C_e));
  net.dcc.assign(cfg.n, latch(cfg.circuit.R_w, cfg.circuit.C_w));
  net.ucc.assign(cfg.n, latch(cfg.circuit.R_u, cfg.circuit.C_u));
  return net;
}

void init_weights(Network& net, InitMode mode, std::mt19937_64& rng) {
  for (size_t k = 0; k < net.xb.dev.size(); ++k) {
    const double hi = net.xb.par[k].w_max();
    if (mode == InitMode::SUPERVISED) {
      net.xb.dev[k].w = hi;
    } else {
      std::uniform_real_distribution<double> u(0.9 * hi, hi);
      net.xb.dev[k].w = u(rng);
    }
  }
}

double PresentationResult::mean_abs_dG() const {
  if (delta_G.empty()) return 0.0;
  double s = 0.0;
  for (double d : delta_G) s += std::fabs(d);
  return s / static_cast<double>(delta_G.size());
}

namespace {

void write_trace_row(std::ostream& os, double t, const Network& net, bool inh,
                     const std::vector<double>& uv) {
  const double hi = net.cfg.circuit.v_supply;
  os << t;
  for (const auto& l : net.lif) os << ',' << l.v_m;
  os << ',' << (inh ? hi : 0.0);
  for (uint8_t a : net.xb.col_active) os << ',' << (a ? hi : 0.0);
  for (RowMode mode : net.xb.row_mode)
    os << ',' << (mode == RowMode::SPIKE ? hi : 0.0);
  for (double v : uv) os << ',' << v;
  os << '\n';
}

}  // namespace

PresentationResult present_sample(Network& net, const SpikeTrain& tr,
                                  const PresentOptions& opts) {
  const NetworkConfig& cfg = net.cfg;
  if (tr.rows() != cfg.n)
    throw std::invalid_argument("present_sample: spike train row count mismatch");
  if (opts.label >= static_cast<int>(cfg.m))
    throw std::invalid_argument("present_sample: label out of range");
  net.reset_transient();

  const size_t n = cfg.n, m = cfg.m;
  const double dt = cfg.dt;
  const double duration = net.sample_duration();
  const double wave_end = tr.last_support_end();

  // Pre-events by step index so a trigger lands in exactly one step even
  // when k*dt accumulates rounding.
  std::vector<long> k_trig(n);
  long last_trig = -1;
  for (size_t i = 0; i < n; ++i) {
    const double tt = tr.threshold_time(i, cfg.circuit.spike_trigger);
    k_trig[i] = std::isfinite(tt) ? static_cast<long>(std::floor(tt / dt)) : -1;
    last_trig = std::max(last_trig, k_trig[i]);
  }
  // Past this point every pre latch has expired, so no update window can
  // open again no matter how many more posts the bias produces.
  const double latch_end =
      static_cast<double>(last_trig + 1) * dt +
      (n > 0 ? net.dcc[0].pulse_width() : 0.0);

  PresentationResult res;
  res.delta_G.assign(n * m, 0.0);
  std::vector<double> G0;
  if (opts.learning) {
    G0.resize(n * m);
    for (size_t j = 0; j < m; ++j)
      for (size_t i = 0; i < n; ++i) G0[j * n + i] = net.xb.G(i, j);
  }

  const bool biased = opts.label >= 0;
  std::vector<double> sv(n), uv(n, 0.0);
  const long steps = static_cast<long>(std::ceil(duration / dt));
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const bool inh_prev = net.lic.output_high();

    for (size_t i = 0; i < n; ++i) sv[i] = tr.waveform_at(i, t);
    const std::vector<double> I = crossbar_currents(net.xb, sv);

    int post = -1;
    int crossings = 0;
    for (size_t j = 0; j < m; ++j) {
      const double ib =
          (biased && static_cast<int>(j) == opts.label) ? cfg.I_b : 0.0;
      if (lif_step(net.lif[j], I[j], ib, inh_prev, dt)) {
        ++crossings;
        if (post < 0) post = static_cast<int>(j);
      }
    }
    const bool tied = crossings > 1;
    if (tied) net.wta_ties += 1;
    if (post >= 0 && res.winner < 0) {
      res.winner = post;
      res.spike_time = t + dt;
      res.tie = tied;
    }

    const LicOutput lo = lic_step(net.lic, post >= 0, dt);

    for (size_t j = 0; j < m; ++j)
      net.xb.col_active[j] =
          scc_step(net.scc[j], static_cast<int>(j) == post, lo.inh_high, dt)
              ? 1
              : 0;

    bool any_update = false;
    for (size_t i = 0; i < n; ++i) {
      const bool pre = k_trig[i] == k;
      const bool sbar = dcc_step(net.dcc[i], pre, lo.inh_high, dt);
      net.xb.row_mode[i] = sbar ? RowMode::SPIKE : RowMode::UPDATE;
      if (pre)
        net.ucc[i].trigger();
      else
        net.ucc[i].relax(dt);
      if (!sbar) {
        bool eq = false;
        uv[i] = ucc_output(net.ucc[i].v_c, lo.v_c_inh, cfg.circuit.ucc, &eq);
        if (eq) net.ucc_ties += 1;
        any_update = true;
      } else {
        uv[i] = 0.0;
      }
    }

    if (opts.learning) crossbar_apply_update(net.xb, uv, sv, dt);

    if (opts.trace) write_trace_row(*opts.trace, t + dt, net, lo.inh_high, uv);

    // Past the last pulse nothing new can latch; once every pre latch has
    // expired no update window can reopen. Without bias the membrane only
    // decays from here, and with bias the sole remaining event is a spike
    // from the labeled column, so wait for the winner before bailing.
    if (!opts.trace && t >= wave_end && post < 0 && !any_update &&
        t + dt >= latch_end && (!biased || res.winner >= 0))
      break;
  }

  if (opts.learning) {
    for (size_t j = 0; j < m; ++j)
      for (size_t i = 0; i < n; ++i)
        res.delta_G[j * n + i] = net.xb.G(i, j) - G0[j * n + i];
  }
  return res;
}

std::vector<EpochLog> train(Network& net, const std::vector<Sample>& data,
                            bool supervised) {
  if (data.empty()) throw std::invalid_argument("train: empty dataset");
  for (const Sample& s : data)
    if (s.label < 0 || s.label >= static_cast<int>(net.cfg.m))
      throw std::invalid_argument("train: label out of range");
  std::vector<EpochLog> log;
  log.reserve(static_cast<size_t>(net.cfg.epochs));
  for (int e = 0; e < net.cfg.epochs; ++e) {
    size_t correct = 0;
    double dg = 0.0;
    for (const Sample& s : data) {
      PresentOptions o;
      o.learning = true;
      o.label = supervised ? s.label : -1;
      const PresentationResult r = present_sample(net, s.train, o);
      if (r.winner == s.label) ++correct;
      dg += r.mean_abs_dG();
    }
    log.push_back({e, static_cast<double>(correct) / data.size(),
                   dg / data.size()});
  }
  return log;
}

Metrics test(Network& net, const std::vector<Sample>& data) {
  if (data.empty()) throw std::invalid_argument("test: empty dataset");
  std::vector<int> labels, preds;
  labels.reserve(data.size());
  preds.reserve(data.size());
  uint64_t ties = 0;
  for (const Sample& s : data) {
    const PresentationResult r = present_sample(net, s.train, PresentOptions{});
    labels.push_back(s.label);
    preds.push_back(r.winner);
    if (r.tie) ++ties;
  }
  return compute_metrics(labels, preds, net.cfg.m, ties);
}

double calibrate_col_gain(const NetworkConfig& cfg,
                          const std::vector<Sample>& data, double lo_frac,
                          double hi_frac) {
  if (data.empty()) throw std::invalid_argument("calibrate: empty dataset");
  if (!(lo_frac > 0 && lo_frac < hi_frac && hi_frac <= 1.0))
    throw std::invalid_argument("calibrate: bad target window");
  const size_t probe_count = std::min<size_t>(data.size(), 32);
  const double t_lo = lo_frac * cfg.T, t_hi = hi_frac * cfg.T;
  auto median_time = [&](double gain) {
    NetworkConfig c = cfg;
    c.col_gain = gain;
    Network net = make_network(c);
    std::mt19937_64 rng(cfg.seed);
    init_weights(net, InitMode::SUPERVISED, rng);
    std::vector<double> times;
    times.reserve(probe_count);
    for (size_t s = 0; s < probe_count; ++s) {
      // No bias, no learning: the pure read-out response to the input.
      const PresentationResult r =
          present_sample(net, data[s].train, PresentOptions{});
      times.push_back(r.winner >= 0 ? r.spike_time
                                    : std::numeric_limits<double>::infinity());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
  };
  double lg_lo = -2.0, lg_hi = 9.0;
  for (int it = 0; it < 80; ++it) {
    const double lg = 0.5 * (lg_lo + lg_hi);
    const double med = median_time(std::pow(10.0, lg));
    if (med > t_hi)
      lg_lo = lg;  // too slow or silent: more gain
    else if (med < t_lo)
      lg_hi = lg;  // too fast: less gain
    else
      return std::pow(10.0, lg);
  }
  throw std::runtime_error("calibrate: no col_gain reaches the target window");
}

namespace {

json params_to_json(const MemristorParams& p) {
  return json{{"D", p.D},           {"mu_v", p.mu_v},
              {"R_on", p.R_on},     {"R_off", p.R_off},
              {"V_T_pos", p.V_T_pos}, {"V_T_neg", p.V_T_neg},
              {"i_on", p.i_on},     {"i_off", p.i_off},
              {"i_0", p.i_0},       {"p", p.p},
              {"delta_frac", p.delta_frac}};
}

MemristorParams params_from_json(const json& j) {
  MemristorParams p;
  p.D = j.at("D").get<double>();
  p.mu_v = j.at("mu_v").get<double>();
  p.R_on = j.at("R_on").get<double>();
  p.R_off = j.at("R_off").get<double>();
  p.V_T_pos = j.at("V_T_pos").get<double>();
  p.V_T_neg = j.at("V_T_neg").get<double>();
  p.i_on = j.at("i_on").get<double>();
  p.i_off = j.at("i_off").get<double>();
  p.i_0 = j.at("i_0").get<double>();
  p.p = j.at("p").get<int>();
  p.delta_frac = j.at("delta_frac").get<double>();
  return p;
}

json netcfg_to_json(const NetworkConfig& c) {
  return json{
      {"n", c.n},
      {"m", c.m},
      {"T", c.T},
      {"dt", c.dt},
      {"C_m", c.C_m},
      {"R_leak", c.R_leak},
      {"v_th", c.v_th},
      {"I_b", c.I_b},
      {"col_gain", c.col_gain},
      {"R0", c.R0},
      {"R1", c.R1},
      {"R2", c.R2},
      {"epochs", c.epochs},
      {"seed", c.seed},
      {"sample_duration", c.sample_duration},
      {"device", params_to_json(c.device)},
      {"spike",
       {{"amplitude", c.spike.amplitude},
        {"rise", c.spike.rise},
        {"fall", c.spike.fall}}},
      {"circuit",
       {{"v_supply", c.circuit.v_supply},
        {"v_switch", c.circuit.v_switch},
        {"R_inh", c.circuit.R_inh},
        {"C_inh", c.circuit.C_inh},
        {"R_e", c.circuit.R_e},
        {"C_e", c.circuit.C_e},
        {"R_w", c.circuit.R_w},
        {"C_w", c.circuit.C_w},
        {"R_u", c.circuit.R_u},
        {"C_u", c.circuit.C_u},
        {"spike_trigger", c.circuit.spike_trigger},
        {"ucc_v_plus", c.circuit.ucc.v_plus},
        {"ucc_v_minus", c.circuit.ucc.v_minus}}}};
}

NetworkConfig netcfg_from_json(const json& j) {
  NetworkConfig c;
  c.n = j.at("n").get<size_t>();
  c.m = j.at("m").get<size_t>();
  c.T = j.at("T").get<double>();
  c.dt = j.at("dt").get<double>();
  c.C_m = j.at("C_m").get<double>();
  c.R_leak = j.at("R_leak").get<double>();
  c.v_th = j.at("v_th").get<double>();
  c.I_b = j.at("I_b").get<double>();
  c.col_gain = j.at("col_gain").get<double>();
  c.R0 = j.at("R0").get<double>();
  c.R1 = j.at("R1").get<double>();
  c.R2 = j.at("R2").get<double>();
  c.epochs = j.at("epochs").get<int>();
  c.seed = j.at("seed").get<uint64_t>();
  c.sample_duration = j.at("sample_duration").get<double>();
  c.device = params_from_json(j.at("device"));
  const json& s = j.at("spike");
  c.spike.amplitude = s.at("amplitude").get<double>();
  c.spike.rise = s.at("rise").get<double>();
  c.spike.fall = s.at("fall").get<double>();
  const json& q = j.at("circuit");
  c.circuit.v_supply = q.at("v_supply").get<double>();
  c.circuit.v_switch = q.at("v_switch").get<double>();
  c.circuit.R_inh = q.at("R_inh").get<double>();
  c.circuit.C_inh = q.at("C_inh").get<double>();
  c.circuit.R_e = q.at("R_e").get<double>();
  c.circuit.C_e = q.at("C_e").get<double>();
  c.circuit.R_w = q.at("R_w").get<double>();
  c.circuit.C_w = q.at("C_w").get<double>();
  c.circuit.R_u = q.at("R_u").get<double>();
  c.circuit.C_u = q.at("C_u").get<double>();
  c.circuit.spike_trigger = q.at("spike_trigger").get<double>();
  c.circuit.ucc.v_plus = q.at("ucc_v_plus").get<double>();
  c.circuit.ucc.v_minus = q.at("ucc_v_minus").get<double>();
  return c;
}

}  // namespace

Model snapshot_model(const Network& net) {
  Model mdl;
  mdl.net = net.cfg;
  const size_t N = net.xb.dev.size();
  mdl.w.resize(N);
  mdl.stuck.resize(N);
  for (size_t k = 0; k < N; ++k) {
    mdl.w[k] = net.xb.dev[k].w;
    mdl.stuck[k] = net.xb.dev[k].stuck ? 1 : 0;
  }
  const MemristorParams& nom = net.cfg.device;
  for (const MemristorParams& p : net.xb.par) {
    if (p.R_on != nom.R_on || p.R_off != nom.R_off ||
        p.V_T_pos != nom.V_T_pos || p.V_T_neg != nom.V_T_neg) {
      mdl.perturbed = true;
      break;
    }
  }
  if (mdl.perturbed) mdl.per_device = net.xb.par;
  return mdl;
}

void restore_weights(Network& net, const Model& mdl) {
  const size_t N = net.xb.dev.size();
  if (mdl.w.size() != N || mdl.stuck.size() != N)
    throw std::invalid_argument("model: weight matrix size mismatch");
  for (size_t k = 0; k < N; ++k) {
    net.xb.dev[k].w = mdl.w[k];
    net.xb.dev[k].stuck = mdl.stuck[k] != 0;
  }
  if (mdl.perturbed) {
    if (mdl.per_device.size() != N)
      throw std::invalid_argument("model: per-device parameter size mismatch");
    net.xb.par = mdl.per_device;
  }
}

std::string model_to_json(const Model& mdl) {
  json j;
  j["schema_version"] = 1;
  j["kind"] = mdl.kind;
  j["network"] = netcfg_to_json(mdl.net);
  if (mdl.kind == "classification") {
    j["grf"] = {{"n2", mdl.grf.n2}, {"beta", mdl.grf.beta}};
    j["scaling"] = {{"mins", mdl.mins}, {"maxs", mdl.maxs}};
  } else {
    j["grid"] = {{"rows", mdl.grid_rows}, {"cols", mdl.grid_cols}};
    j["pattern_lead"] = mdl.pattern_lead;
  }
  j["w"] = mdl.w;
  j["stuck"] = mdl.stuck;
  j["perturbed"] = mdl.perturbed;
  if (mdl.perturbed) {
    json arr = json::array();
    for (const MemristorParams& p : mdl.per_device)
      arr.push_back(json{{"R_on", p.R_on},
                         {"R_off", p.R_off},
                         {"V_T_pos", p.V_T_pos},
                         {"V_T_neg", p.V_T_neg}});
    j["per_device"] = std::move(arr);
  }
  json logj = json::array();
  for (const EpochLog& e : mdl.log)
    logj.push_back(json{{"epoch", e.epoch},
                        {"train_accuracy", e.train_accuracy},
                        {"mean_abs_dG", e.mean_abs_dG}});
  j["training_log"] = std::move(logj);
  return j.dump(2) + "\n";
}

Model model_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("schema_version").get<int>() != 1)
    throw std::invalid_argument("model: unsupported schema_version");
  Model mdl;
  mdl.kind = j.at("kind").get<std::string>();
  mdl.net = netcfg_from_json(j.at("network"));
  if (mdl.kind == "classification") {
    mdl.grf.n2 = j.at("grf").at("n2").get<int>();
    mdl.grf.beta = j.at("grf").at("beta").get<double>();
    mdl.mins = j.at("scaling").at("mins").get<std::vector<double>>();
    mdl.maxs = j.at("scaling").at("maxs").get<std::vector<double>>();
  } else if (mdl.kind == "pattern") {
    mdl.grid_rows = j.at("grid").at("rows").get<size_t>();
    mdl.grid_cols = j.at("grid").at("cols").get<size_t>();
    mdl.pattern_lead = j.at("pattern_lead").get<double>();
  } else {
    throw std::invalid_argument("model: unknown kind");
  }
  mdl.w = j.at("w").get<std::vector<double>>();
  mdl.stuck = j.at("stuck").get<std::vector<uint8_t>>();
  mdl.perturbed = j.at("perturbed").get<bool>();
  if (mdl.perturbed) {
    for (const json& e : j.at("per_device")) {
      MemristorParams p = mdl.net.device;
      p.R_on = e.at("R_on").get<double>();
      p.R_off = e.at("R_off").get<double>();
      p.V_T_pos = e.at("V_T_pos").get<double>();
      p.V_T_neg = e.at("V_T_neg").get<double>();
      mdl.per_device.push_back(p);
    }
  }
  for (const json& e : j.at("training_log"))
    mdl.log.push_back({e.at("epoch").get<int>(),
                       e.at("train_accuracy").get<double>(),
                       e.at("mean_abs_dG").get<double>()});
  return mdl;
}

void save_model(const Model& mdl, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << model_to_json(mdl);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace memsnn
