#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>

#include "memsnn/config.hpp"
#include "memsnn/dataset.hpp"
#include "memsnn/engine.hpp"
#include "memsnn/experiments.hpp"
#include "memsnn/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace memsnn;

namespace {

// Exit codes: 0 success, 2 I/O failure, 3 config/validation error,
// 4 simulation produced no usable result.
constexpr int kExitIo = 2;
constexpr int kExitConfig = 3;
constexpr int kExitSim = 4;

std::string iso_timestamp() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string hex64(uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

json metrics_json(const Metrics& mt) {
  const size_t m = mt.f1.size();
  json conf = json::array();
  for (size_t r = 0; r < m; ++r) {
    json row = json::array();
    for (size_t c = 0; c < m; ++c) row.push_back(mt.confusion[r * m + c]);
    conf.push_back(std::move(row));
  }
  json j;
  j["accuracy"] = mt.accuracy;
  j["macro_f1"] = mt.macro_f1;
  j["f1"] = mt.f1;
  j["confusion"] = std::move(conf);
  j["total"] = mt.total;
  j["no_spike"] = mt.no_spike;
  j["ties"] = mt.ties;
  return j;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + p.string());
  out << s;
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

void write_metrics_file(const fs::path& path, const RunConfig& rc,
                        const json& results) {
  json top;
  top["schema_version"] = 1;
  top["config_hash"] = hex64(config_hash(rc));
  top["timestamp"] = iso_timestamp();
  top["results"] = results;
  write_text(path, top.dump(2) + "\n");
}

void apply_env_seed(RunConfig& rc) {
  const char* s = std::getenv("MEMSNN_SEED");
  if (!s || !*s) return;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0')
    throw std::invalid_argument(std::string("MEMSNN_SEED: not an integer: ") +
                                s);
  rc.net.seed = static_cast<uint64_t>(v);
}

std::string sweep_csv(const std::vector<SweepPoint>& pts) {
  std::ostringstream ss;
  ss.precision(9);
  ss << "level,mean,std,trials\n";
  for (const SweepPoint& p : pts)
    ss << p.level << ',' << p.mean << ',' << p.stddev << ',' << p.trials
       << '\n';
  return ss.str();
}

// Samples in presentation order for the configured task; classification
// uses the training split (scaling refitted the same way training does).
std::vector<Sample> task_samples(const RunConfig& rc) {
  if (rc.task == "pattern") {
    const PatternSet set = load_patterns(rc.data);
    return encode_pattern_set(set, rc.pattern_lead, rc.net.spike, rc.net.T);
  }
  const TabularData data = load_csv(rc.data);
  const auto [train_idx, test_idx] =
      stratified_split(data.y, rc.train_fraction, rc.split_seed);
  std::vector<double> mins, maxs;
  fit_minmax(data, train_idx, &mins, &maxs);
  return encode_tabular(data, train_idx, mins, maxs, rc.grf, rc.net.spike,
                        rc.net.T);
}

int cmd_train(const std::string& cfg_path, const std::string& out_dir) {
  RunConfig rc = load_run_config(cfg_path);
  apply_env_seed(rc);
  fs::create_directories(out_dir);
  json results;
  Model mdl;
  if (rc.task == "pattern") {
    const PatternSet set = load_patterns(rc.data);
    mdl = train_pattern_model(rc.net, set, rc.pattern_lead);
    Network net = make_network(rc.net);
    restore_weights(net, mdl);
    const std::vector<Sample> samples =
        encode_pattern_set(set, rc.pattern_lead, rc.net.spike, rc.net.T);
    const Metrics mt = memsnn::test(net, samples);
    results["test"] = metrics_json(mt);
    if (mt.no_spike == mt.total)
      throw std::runtime_error("simulation: no output spikes on any sample");
    std::cout << "pattern accuracy " << mt.accuracy << " over " << mt.total
              << " samples\n";
  } else {
    const TabularData data = load_csv(rc.data);
    const ClassificationResult res = run_classification(
        rc.net, rc.grf, data, rc.train_fraction, rc.split_seed);
    mdl = res.model;
    results["train"] = metrics_json(res.train_metrics);
    results["test"] = metrics_json(res.test_metrics);
    if (res.test_metrics.no_spike == res.test_metrics.total)
      throw std::runtime_error("simulation: no output spikes on the test split");
    std::cout << "train accuracy " << res.train_metrics.accuracy
              << ", test accuracy " << res.test_metrics.accuracy
              << ", test macro-F1 " << res.test_metrics.macro_f1 << "\n";
  }
  save_model(mdl, (fs::path(out_dir) / "model.json").string());
  write_metrics_file(fs::path(out_dir) / "metrics.json", rc, results);
  return 0;
}

int cmd_test(const std::string& model_path, const std::string& data_path,
             const std::string& out_dir) {
  const Model mdl = load_model(model_path);
  std::vector<Sample> samples;
  if (mdl.kind == "pattern") {
    const PatternSet set = load_patterns(data_path);
    samples =
        encode_pattern_set(set, mdl.pattern_lead, mdl.net.spike, mdl.net.T);
  } else {
    const TabularData data = load_csv(data_path);
    std::vector<size_t> idx(data.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    samples = encode_tabular(data, idx, mdl.mins, mdl.maxs, mdl.grf,
                             mdl.net.spike, mdl.net.T);
  }
  Network net = make_network(mdl.net);
  restore_weights(net, mdl);
  const Metrics mt = memsnn::test(net, samples);
  fs::create_directories(out_dir);
  json top;
  top["schema_version"] = 1;
  top["model"] = model_path;
  top["timestamp"] = iso_timestamp();
  top["results"] = json{{"test", metrics_json(mt)}};
  write_text(fs::path(out_dir) / "metrics.json", top.dump(2) + "\n");
  std::cout << "accuracy " << mt.accuracy << " over " << mt.total
            << " samples (" << mt.no_spike << " silent)\n";
  if (mt.no_spike == mt.total)
    throw std::runtime_error("simulation: no output spikes on any sample");
  return 0;
}

int cmd_sweep(const std::string& cfg_path, const std::string& kind,
              const std::string& out_dir, size_t trials_override, int jobs) {
  RunConfig rc = load_run_config(cfg_path);
  apply_env_seed(rc);
  fs::create_directories(out_dir);
  std::vector<SweepPoint> pts;
  if (kind == "noise") {
    if (rc.task != "pattern")
      throw std::invalid_argument("sweep: noise runs on a pattern task");
    const PatternSet set = load_patterns(rc.data);
    const Model mdl = train_pattern_model(rc.net, set, rc.pattern_lead);
    const size_t trials =
        trials_override > 0 ? trials_override : rc.noise_trials;
    pts = run_noise_sweep(mdl, set, rc.noise_levels, trials, rc.net.seed,
                          jobs);
  } else {
    if (rc.task != "classification")
      throw std::invalid_argument("sweep: " + kind +
                                  " runs on a classification task");
    if (rc.fault_levels.empty())
      throw std::invalid_argument("sweep: config sweep.fault_levels is empty");
    const FaultKind fk = kind == "stuck"   ? FaultKind::STUCK
                         : kind == "var_r" ? FaultKind::VAR_R
                                           : FaultKind::VAR_VT;
    const TabularData data = load_csv(rc.data);
    const size_t repeats =
        trials_override > 0 ? trials_override : rc.fault_repeats;
    pts = run_fault_campaign(fk, rc.fault_levels, repeats, rc.net, rc.grf,
                             data, rc.train_fraction, rc.split_seed,
                             rc.net.seed, jobs);
  }
  write_text(fs::path(out_dir) / "sweep.csv", sweep_csv(pts));
  for (const SweepPoint& p : pts)
    std::cout << "level " << p.level << ": mean " << p.mean << " std "
              << p.stddev << " (" << p.trials << " trials)\n";
  return 0;
}

int cmd_heatmap(const std::string& model_path, const std::string& out_prefix) {
  const Model mdl = load_model(model_path);
  const HeatmapFiles files = export_heatmap(mdl, out_prefix);
  std::cout << "wrote " << files.csv << "\n";
  for (const std::string& p : files.pgms) std::cout << "wrote " << p << "\n";
  if (files.pgms.empty())
    std::cerr << "note: model carries no pixel grid; wrote CSV only\n";
  return 0;
}

int cmd_calibrate(const std::string& cfg_path) {
  RunConfig rc = load_run_config(cfg_path);
  apply_env_seed(rc);
  const std::vector<Sample> samples = task_samples(rc);
  const double gain = calibrate_col_gain(rc.net, samples);
  json j;
  j["col_gain"] = gain;
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_trace(const std::string& cfg_path, const std::string& out_path,
              size_t sample_idx) {
  RunConfig rc = load_run_config(cfg_path);
  apply_env_seed(rc);
  const std::vector<Sample> samples = task_samples(rc);
  if (sample_idx >= samples.size())
    throw std::invalid_argument("trace: sample index out of range (have " +
                                std::to_string(samples.size()) + ")");
  Network net = make_network(rc.net);
  std::mt19937_64 rng = derive_stream(rc.net.seed, "init");
  init_weights(net,
               rc.net.I_b > 0 ? InitMode::SUPERVISED : InitMode::UNSUPERVISED,
               rng);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
  out.precision(10);
  out << "t";
  for (size_t j = 0; j < net.cfg.m; ++j) out << ",v_m_" << j;
  out << ",v_inh";
  for (size_t j = 0; j < net.cfg.m; ++j) out << ",v_e_" << j;
  for (size_t i = 0; i < net.cfg.n; ++i) out << ",v_sbar_" << i;
  for (size_t i = 0; i < net.cfg.n; ++i) out << ",v_updt_" << i;
  out << "\n";
  PresentOptions o;
  o.learning = true;
  o.label = samples[sample_idx].label;
  o.trace = &out;
  const PresentationResult r = present_sample(net, samples[sample_idx].train, o);
  if (!out) throw std::runtime_error("write failed: " + out_path);
  std::cout << "winner " << r.winner << " at " << r.spike_time << " s\n";
  return 0;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    std::cerr << "error: " << what << "\n";
    if (what.rfind("calibrate:", 0) == 0 || what.rfind("simulation:", 0) == 0)
      return kExitSim;
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Behavioral simulator for a memristive spiking network trained "
      "in situ by circuit-level STDP"};
  app.require_subcommand(1);

  std::string cfg_path, model_path, data_path, out_dir, out_path, kind;
  size_t trials = 0, sample_idx = 0;
  int jobs = 1;
  std::function<int()> action;

  auto* tr = app.add_subcommand(
      "train", "Train a network; writes model.json and metrics.json");
  tr->add_option("--config", cfg_path, "Run configuration (JSON)")->required();
  tr->add_option("--out", out_dir, "Output directory, created if missing")
      ->required();
  tr->callback([&] { action = [&] { return cmd_train(cfg_path, out_dir); }; });

  auto* te = app.add_subcommand(
      "test", "Evaluate a trained model on a dataset; writes metrics.json");
  te->add_option("--model", model_path, "Trained model (JSON)")->required();
  te->add_option("--data", data_path,
                 "Dataset path (pattern text file or CSV, per the model kind)")
      ->required();
  te->add_option("--out", out_dir, "Output directory, created if missing")
      ->required();
  te->callback(
      [&] { action = [&] { return cmd_test(model_path, data_path, out_dir); }; });

  auto* sw = app.add_subcommand(
      "sweep", "Robustness sweep; writes sweep.csv (level, mean, std, trials)");
  sw->add_option("--config", cfg_path, "Run configuration (JSON)")->required();
  sw->add_option("--kind", kind,
                 "noise (pixel-flip fraction), stuck (device fraction), "
                 "var_r or var_vt (relative dispersion)")
      ->required()
      ->check(CLI::IsMember({"noise", "stuck", "var_r", "var_vt"}));
  sw->add_option("--out", out_dir, "Output directory, created if missing")
      ->required();
  sw->add_option("--trials", trials,
                 "Trials (noise) or retrain repeats (faults); 0 = from config");
  sw->add_option("--jobs", jobs, "Worker threads (default 1)");
  sw->callback([&] {
    action = [&] { return cmd_sweep(cfg_path, kind, out_dir, trials, jobs); };
  });

  auto* hm = app.add_subcommand(
      "heatmap",
      "Export trained conductances: CSV in micro-ohm^-1, plus one PGM image "
      "per output column for pattern models");
  hm->add_option("--model", model_path, "Trained model (JSON)")->required();
  hm->add_option("--out", out_path, "Output path prefix")->required();
  hm->callback(
      [&] { action = [&] { return cmd_heatmap(model_path, out_path); }; });

  auto* ca = app.add_subcommand(
      "calibrate",
      "Search the read-out gain so median first-spike latency lands mid "
      "window; prints {\"col_gain\": value}");
  ca->add_option("--config", cfg_path, "Run configuration (JSON)")->required();
  ca->callback([&] { action = [&] { return cmd_calibrate(cfg_path); }; });

  auto* tc = app.add_subcommand(
      "trace",
      "Per-step CSV trace (seconds and volts) of one training presentation");
  tc->add_option("--config", cfg_path, "Run configuration (JSON)")->required();
  tc->add_option("--out", out_path, "Trace CSV path")->required();
  tc->add_option("--sample", sample_idx, "Sample index (default 0)");
  tc->callback([&] {
    action = [&] { return cmd_trace(cfg_path, out_path, sample_idx); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  return guarded(action);
}
