#include "memsnn/config.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>

namespace memsnn {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object())
    throw std::invalid_argument("config: " + path + " must be an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        ok = true;
        break;
      }
    if (!ok)
      throw std::invalid_argument("config: unknown key '" +
                                  (path.empty() ? "" : path + ".") +
                                  item.key() + "'");
  }
}

template <typename T>
void read_opt(const json& j, const char* key, T* out) {
  if (j.contains(key)) *out = j.at(key).get<T>();
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: " + origin + ": " + e.what());
  }
  try {
    check_keys(j, "",
               {"schema_version", "task", "data", "train_fraction",
                "split_seed", "pattern_lead", "grf", "network", "device",
                "spike", "circuit", "sweep"});
    RunConfig rc;
    rc.schema_version = j.at("schema_version").get<int>();
    if (rc.schema_version != 1)
      throw std::invalid_argument("config: unsupported schema_version " +
                                  std::to_string(rc.schema_version));
    rc.task = j.at("task").get<std::string>();
    if (rc.task != "pattern" && rc.task != "classification")
      throw std::invalid_argument("config: task must be 'pattern' or "
                                  "'classification', got '" +
                                  rc.task + "'");
    rc.data = j.at("data").get<std::string>();
    read_opt(j, "train_fraction", &rc.train_fraction);
    if (!(rc.train_fraction > 0.0 && rc.train_fraction < 1.0))
      throw std::invalid_argument("config: train_fraction must be in (0, 1)");
    read_opt(j, "split_seed", &rc.split_seed);
    read_opt(j, "pattern_lead", &rc.pattern_lead);
    if (!(rc.pattern_lead > 0.0))
      throw std::invalid_argument("config: pattern_lead must be positive");

    if (j.contains("grf")) {
      const json& g = j.at("grf");
      check_keys(g, "grf", {"n2", "beta"});
      read_opt(g, "n2", &rc.grf.n2);
      read_opt(g, "beta", &rc.grf.beta);
      if (rc.grf.n2 < 2)
        throw std::invalid_argument("config: grf.n2 must be at least 2");
      if (!(rc.grf.beta > 0.0))
        throw std::invalid_argument("config: grf.beta must be positive");
    }

    const json& net = j.at("network");
    check_keys(net, "network",
               {"n", "m", "T", "dt", "C_m", "R_leak", "v_th", "I_b",
                "col_gain", "R0", "R1", "R2", "epochs", "seed",
                "sample_duration"});
    rc.net.n = net.at("n").get<size_t>();
    rc.net.m = net.at("m").get<size_t>();
    read_opt(net, "T", &rc.net.T);
    read_opt(net, "dt", &rc.net.dt);
    read_opt(net, "C_m", &rc.net.C_m);
    read_opt(net, "R_leak", &rc.net.R_leak);
    read_opt(net, "v_th", &rc.net.v_th);
    read_opt(net, "I_b", &rc.net.I_b);
    read_opt(net, "col_gain", &rc.net.col_gain);
    read_opt(net, "R0", &rc.net.R0);
    read_opt(net, "R1", &rc.net.R1);
    read_opt(net, "R2", &rc.net.R2);
    read_opt(net, "epochs", &rc.net.epochs);
    read_opt(net, "seed", &rc.net.seed);
    read_opt(net, "sample_duration", &rc.net.sample_duration);

    if (j.contains("device")) {
      const json& d = j.at("device");
      check_keys(d, "device",
                 {"D", "mu_v", "R_on", "R_off", "V_T_pos", "V_T_neg", "i_on",
                  "i_off", "i_0", "p", "delta_frac"});
      read_opt(d, "D", &rc.net.device.D);
      read_opt(d, "mu_v", &rc.net.device.mu_v);
      read_opt(d, "R_on", &rc.net.device.R_on);
      read_opt(d, "R_off", &rc.net.device.R_off);
      read_opt(d, "V_T_pos", &rc.net.device.V_T_pos);
      read_opt(d, "V_T_neg", &rc.net.device.V_T_neg);
      read_opt(d, "i_on", &rc.net.device.i_on);
      read_opt(d, "i_off", &rc.net.device.i_off);
      read_opt(d, "i_0", &rc.net.device.i_0);
      read_opt(d, "p", &rc.net.device.p);
      read_opt(d, "delta_frac", &rc.net.device.delta_frac);
    }

    if (j.contains("spike")) {
      const json& s = j.at("spike");
      check_keys(s, "spike", {"amplitude", "rise", "fall"});
      read_opt(s, "amplitude", &rc.net.spike.amplitude);
      read_opt(s, "rise", &rc.net.spike.rise);
      read_opt(s, "fall", &rc.net.spike.fall);
    }

    if (j.contains("circuit")) {
      const json& c = j.at("circuit");
      check_keys(c, "circuit",
                 {"v_supply", "v_switch", "R_inh", "C_inh", "R_e", "C_e",
                  "R_w", "C_w", "R_u", "C_u", "spike_trigger", "ucc_v_plus",
                  "ucc_v_minus"});
      read_opt(c, "v_supply", &rc.net.circuit.v_supply);
      read_opt(c, "v_switch", &rc.net.circuit.v_switch);
      read_opt(c, "R_inh", &rc.net.circuit.R_inh);
      read_opt(c, "C_inh", &rc.net.circuit.C_inh);
      read_opt(c, "R_e", &rc.net.circuit.R_e);
      read_opt(c, "C_e", &rc.net.circuit.C_e);
      read_opt(c, "R_w", &rc.net.circuit.R_w);
      read_opt(c, "C_w", &rc.net.circuit.C_w);
      read_opt(c, "R_u", &rc.net.circuit.R_u);
      read_opt(c, "C_u", &rc.net.circuit.C_u);
      read_opt(c, "spike_trigger", &rc.net.circuit.spike_trigger);
      read_opt(c, "ucc_v_plus", &rc.net.circuit.ucc.v_plus);
      read_opt(c, "ucc_v_minus", &rc.net.circuit.ucc.v_minus);
    }

    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      check_keys(s, "sweep",
                 {"noise_levels", "noise_trials", "fault_levels",
                  "fault_repeats"});
      read_opt(s, "noise_levels", &rc.noise_levels);
      read_opt(s, "noise_trials", &rc.noise_trials);
      read_opt(s, "fault_levels", &rc.fault_levels);
      read_opt(s, "fault_repeats", &rc.fault_repeats);
      for (double v : rc.noise_levels)
        if (!(v >= 0.0 && v <= 1.0))
          throw std::invalid_argument(
              "config: sweep.noise_levels entries must be in [0, 1]");
      if (rc.noise_trials == 0)
        throw std::invalid_argument("config: sweep.noise_trials must be > 0");
      if (rc.fault_repeats == 0)
        throw std::invalid_argument("config: sweep.fault_repeats must be > 0");
    }

    rc.net.validate();
    return rc;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: " + origin + ": " + e.what());
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path);
}

std::string dump_run_config(const RunConfig& rc) {
  json j;
  j["schema_version"] = rc.schema_version;
  j["task"] = rc.task;
  j["data"] = rc.data;
  j["train_fraction"] = rc.train_fraction;
  j["split_seed"] = rc.split_seed;
  j["pattern_lead"] = rc.pattern_lead;
  j["grf"] = {{"n2", rc.grf.n2}, {"beta", rc.grf.beta}};
  j["network"] = {{"n", rc.net.n},
                  {"m", rc.net.m},
                  {"T", rc.net.T},
                  {"dt", rc.net.dt},
                  {"C_m", rc.net.C_m},
                  {"R_leak", rc.net.R_leak},
                  {"v_th", rc.net.v_th},
                  {"I_b", rc.net.I_b},
                  {"col_gain", rc.net.col_gain},
                  {"R0", rc.net.R0},
                  {"R1", rc.net.R1},
                  {"R2", rc.net.R2},
                  {"epochs", rc.net.epochs},
                  {"seed", rc.net.seed},
                  {"sample_duration", rc.net.sample_duration}};
  j["device"] = {{"D", rc.net.device.D},
                 {"mu_v", rc.net.device.mu_v},
                 {"R_on", rc.net.device.R_on},
                 {"R_off", rc.net.device.R_off},
                 {"V_T_pos", rc.net.device.V_T_pos},
                 {"V_T_neg", rc.net.device.V_T_neg},
                 {"i_on", rc.net.device.i_on},
                 {"i_off", rc.net.device.i_off},
                 {"i_0", rc.net.device.i_0},
                 {"p", rc.net.device.p},
                 {"delta_frac", rc.net.device.delta_frac}};
  j["spike"] = {{"amplitude", rc.net.spike.amplitude},
                {"rise", rc.net.spike.rise},
                {"fall", rc.net.spike.fall}};
  j["circuit"] = {{"v_supply", rc.net.circuit.v_supply},
                  {"v_switch", rc.net.circuit.v_switch},
                  {"R_inh", rc.net.circuit.R_inh},
                  {"C_inh", rc.net.circuit.C_inh},
                  {"R_e", rc.net.circuit.R_e},
                  {"C_e", rc.net.circuit.C_e},
                  {"R_w", rc.net.circuit.R_w},
                  {"C_w", rc.net.circuit.C_w},
                  {"R_u", rc.net.circuit.R_u},
                  {"C_u", rc.net.circuit.C_u},
                  {"spike_trigger", rc.net.circuit.spike_trigger},
                  {"ucc_v_plus", rc.net.circuit.ucc.v_plus},
                  {"ucc_v_minus", rc.net.circuit.ucc.v_minus}};
  j["sweep"] = {{"noise_levels", rc.noise_levels},
                {"noise_trials", rc.noise_trials},
                {"fault_levels", rc.fault_levels},
                {"fault_repeats", rc.fault_repeats}};
  return j.dump(2) + "\n";
}

uint64_t config_hash(const RunConfig& rc) {
  const std::string s = dump_run_config(rc);
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace memsnn
