#include <doctest.h>

#include <stdexcept>
#include <string>

#include "memsnn/config.hpp"

using namespace memsnn;

namespace {

const char* kMinimal = R"({
  "schema_version": 1,
  "task": "pattern",
  "data": "data/patterns_5x3.txt",
  "network": {"n": 15, "m": 4}
})";

std::string expect_throw(const std::string& text) {
  try {
    parse_run_config(text, "inline");
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  FAIL("expected std::invalid_argument");
  return "";
}

}  // namespace

TEST_CASE("minimal config parses and keeps documented defaults") {
  const RunConfig rc = parse_run_config(kMinimal, "inline");
  CHECK(rc.task == "pattern");
  CHECK(rc.data == "data/patterns_5x3.txt");
  CHECK(rc.net.n == 15);
  CHECK(rc.net.m == 4);
  CHECK(rc.train_fraction == 0.7);
  CHECK(rc.split_seed == 42);
  CHECK(rc.pattern_lead == 5e-4);
  CHECK(rc.grf.n2 == 3);
  CHECK(rc.net.T == 1e-3);
  CHECK(rc.net.device.D == 3e-9);
  CHECK(rc.net.device.R_off == 6e7);
  CHECK(rc.noise_levels.size() == 3);
  CHECK(rc.noise_levels[1] == doctest::Approx(2.0 / 15).epsilon(1e-12));
  CHECK(rc.noise_trials == 50);
  CHECK(rc.fault_levels.empty());
  CHECK(rc.fault_repeats == 5);
}

TEST_CASE("unknown keys are rejected with their dotted path") {
  const std::string root = expect_throw(R"({
    "schema_version": 1, "task": "pattern", "data": "d",
    "network": {"n": 2, "m": 2}, "banana": 1
  })");
  CHECK(root.find("banana") != std::string::npos);

  const std::string nested = expect_throw(R"({
    "schema_version": 1, "task": "pattern", "data": "d",
    "network": {"n": 2, "m": 2, "voltage": 5}
  })");
  CHECK(nested.find("network.voltage") != std::string::npos);

  const std::string dev = expect_throw(R"({
    "schema_version": 1, "task": "pattern", "data": "d",
    "network": {"n": 2, "m": 2}, "device": {"Ron": 1e6}
  })");
  CHECK(dev.find("device.Ron") != std::string::npos);
}

TEST_CASE("required fields and version gate") {
  CHECK(expect_throw(R"({"task": "pattern", "data": "d",
                         "network": {"n": 2, "m": 2}})")
            .find("schema_version") != std::string::npos);
  CHECK(expect_throw(R"({"schema_version": 2, "task": "pattern", "data": "d",
                         "network": {"n": 2, "m": 2}})")
            .find("schema_version") != std::string::npos);
  CHECK(expect_throw(R"({"schema_version": 1, "data": "d",
                         "network": {"n": 2, "m": 2}})")
            .find("task") != std::string::npos);
  CHECK(expect_throw(R"({"schema_version": 1, "task": "pattern",
                         "network": {"n": 2, "m": 2}})")
            .find("data") != std::string::npos);
  CHECK(expect_throw(R"({"schema_version": 1, "task": "pattern",
                         "data": "d"})")
            .find("network") != std::string::npos);
  CHECK(expect_throw(R"({"schema_version": 1, "task": "dance", "data": "d",
                         "network": {"n": 2, "m": 2}})")
            .find("task") != std::string::npos);
  // Invalid JSON reports the origin label.
  CHECK(expect_throw("{ not json").find("inline") != std::string::npos);
}

TEST_CASE("overrides reach the nested structs") {
  const RunConfig rc = parse_run_config(R"({
    "schema_version": 1,
    "task": "classification",
    "data": "data/iris.csv",
    "train_fraction": 0.6,
    "split_seed": 7,
    "grf": {"n2": 5, "beta": 2.0},
    "network": {"n": 20, "m": 3, "C_m": 7e-6, "I_b": 1e-4, "epochs": 5,
                 "dt": 5e-7, "col_gain": 123.5},
    "device": {"R_on": 2e6, "V_T_neg": -2.0},
    "spike": {"amplitude": 1.15},
    "circuit": {"C_inh": 2e-6},
    "sweep": {"fault_levels": [0.1, 0.2], "fault_repeats": 3}
  })",
                                        "inline");
  CHECK(rc.train_fraction == 0.6);
  CHECK(rc.split_seed == 7);
  CHECK(rc.grf.n2 == 5);
  CHECK(rc.grf.beta == 2.0);
  CHECK(rc.net.C_m == 7e-6);
  CHECK(rc.net.I_b == 1e-4);
  CHECK(rc.net.epochs == 5);
  CHECK(rc.net.col_gain == 123.5);
  CHECK(rc.net.device.R_on == 2e6);
  CHECK(rc.net.device.V_T_neg == -2.0);
  CHECK(rc.net.device.R_off == 6e7);  // untouched default
  CHECK(rc.net.spike.amplitude == 1.15);
  CHECK(rc.net.circuit.C_inh == 2e-6);
  CHECK(rc.fault_levels == std::vector<double>{0.1, 0.2});
  CHECK(rc.fault_repeats == 3);
}

TEST_CASE("network validation runs on the parsed result") {
  const std::string e = expect_throw(R"({
    "schema_version": 1, "task": "pattern", "data": "d",
    "network": {"n": 2, "m": 2, "dt": 2e-3}
  })");
  CHECK(e.find("dt") != std::string::npos);
  expect_throw(R"({
    "schema_version": 1, "task": "pattern", "data": "d",
    "network": {"n": 2, "m": 2}, "spike": {"amplitude": 1.3}
  })");
  expect_throw(R"({
    "schema_version": 1, "task": "pattern", "data": "d",
    "train_fraction": 1.5, "network": {"n": 2, "m": 2}
  })");
}

TEST_CASE("canonical dump round trips and drives the hash") {
  const RunConfig rc = parse_run_config(kMinimal, "inline");
  const std::string dumped = dump_run_config(rc);
  const RunConfig back = parse_run_config(dumped, "dump");
  CHECK(dump_run_config(back) == dumped);
  CHECK(config_hash(back) == config_hash(rc));

  RunConfig other = rc;
  other.net.v_th *= 2;
  CHECK(config_hash(other) != config_hash(rc));
}
