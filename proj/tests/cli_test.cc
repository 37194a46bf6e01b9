// Copyright 2026 The qcausal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcausal/fixtures.h"
#include "qcausal/io.h"
#include "test_support.h"

using namespace qcausal;

namespace {

const std::string kData = QCAUSAL_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qcausal");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string &name, const json &doc) {
  const auto path = std::filesystem::temp_directory_path() / ("qcausal_cli_test_" + name);
  std::ofstream(path) << doc.dump();
  return path.string();
}

}  // namespace

TEST(Cli, SwitchDemoPasses) {
  const auto r = run({"switch-demo"});
  EXPECT_EQ(r.code, kExitPass) << r.out << r.err;
  EXPECT_NE(r.out.find("PASS switch demo"), std::string::npos);
  const auto j = run({"switch-demo", "--format", "json"});
  EXPECT_EQ(j.code, kExitPass);
  EXPECT_TRUE(parse_json_text(j.out)["pass"].get<bool>());
}

TEST(Cli, SimulateSwitchDocument) {
  const auto r = run({"simulate", kData + "/switch_protocol.json", "--x", "0,1,1", "--format", "json"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const json j = parse_json_text(r.out);
  EXPECT_NEAR(j["probs"][0].get<double>(), 5.0 / 16.0, 1e-10);
}

TEST(Cli, SimulateRejectsTooFewSteps) {
  const auto r = run({"simulate", kData + "/too_few_steps.json", "--x", "0,0"});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("T >= N"), std::string::npos) << r.err;
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(run({"simulate", kData + "/does_not_exist.json", "--x", "0"}).code, kExitInputError);
  EXPECT_EQ(run({"simulate", kData + "/switch_protocol.json", "--x", "0,1"}).code, kExitInputError);
  EXPECT_EQ(run({"simulate", kData + "/switch_protocol.json", "--x", "0,1,2"}).code, kExitInputError);
  EXPECT_EQ(run({"no-such-command"}).code, kExitInputError);
  EXPECT_EQ(run({"--help"}).code, kExitPass);
  json doc = protocol_to_json(build_switch_protocol());
  doc["extra"] = 1;
  const auto r = run({"verify", write_temp("extra.json", doc)});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("/extra"), std::string::npos) << r.err;
}

TEST(Cli, VerifyAndLemmas) {
  const auto v = run({"verify", kData + "/switch_protocol.json"});
  EXPECT_EQ(v.code, kExitPass) << v.out << v.err;
  EXPECT_EQ(v.out.rfind("PASS", 0), 0u) << v.out;
  const auto l = run({"lemmas", kData + "/switch_protocol.json", "--x", "011"});
  EXPECT_EQ(l.code, kExitPass) << l.out << l.err;
}

TEST(Cli, InvalidProtocolIsACheckFailure) {
  const std::string path = write_temp("idle.json", protocol_to_json(fixtures::idle_protocol()));
  EXPECT_EQ(run({"verify", path}).code, kExitCheckFailed);
  EXPECT_EQ(run({"simulate", path, "--x", "0,0"}).code, kExitCheckFailed);
}

TEST(Cli, ExtractEmitsCausalModelDocument) {
  const auto r = run({"extract", kData + "/switch_protocol.json", "--x", "0,1,1"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const auto m = causal_model_from_json(parse_json_text(r.out));
  EXPECT_NEAR(causal_distribution(m)({0, 0, 0}), 5.0 / 16.0, 1e-10);
  EXPECT_EQ(run({"extract", kData + "/switch_protocol.json", "--x", "0,1,1", "--format", "text"}).code, kExitPass);
}

TEST(Cli, RewriteSwitchCircuit) {
  const auto r = run({"rewrite", kData + "/switch_circuit.json"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const auto spec = protocol_from_json(parse_json_text(r.out));
  EXPECT_NEAR(quantum_distribution(spec, SettingVector{{0, 1, 1}})({0, 0, 0}), 5.0 / 16.0, 1e-10);
}

TEST(Cli, PolytopeCheck) {
  const auto in = run({"polytope-check", kData + "/two_party_quantum.json"});
  EXPECT_EQ(in.code, kExitPass) << in.out << in.err;
  EXPECT_NE(in.out.find("INSIDE"), std::string::npos);
  const auto out = run({"polytope-check", kData + "/perfect_guess.json", "--format", "json"});
  EXPECT_EQ(out.code, kExitCheckFailed) << out.out << out.err;
  const json j = parse_json_text(out.out);
  EXPECT_EQ(j["status"], "outside");
  EXPECT_GT(j["margin"].get<double>(), 0.0);
}

TEST(Cli, Verbosity) {
  setenv("QCAUSAL_VERBOSITY", "0", 1);
  EXPECT_EQ(report_verbosity(), 0);
  setenv("QCAUSAL_VERBOSITY", "7", 1);
  EXPECT_EQ(report_verbosity(), 2);
  unsetenv("QCAUSAL_VERBOSITY");
  EXPECT_EQ(report_verbosity(), 1);
}
