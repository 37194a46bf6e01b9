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

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "qcausal/fixtures.h"
#include "qcausal/io.h"

namespace qcausal {

int report_verbosity() {
  const char *v = std::getenv("QCAUSAL_VERBOSITY");
  if (v == nullptr || *v == '\0') return 1;
  return std::clamp(std::atoi(v), 0, 2);
}

namespace {

struct Options {
  std::string document;
  std::string x;
  std::string format;  // empty: the command's default
  std::uint64_t seed = 0;
  bool allow_large = false;
};

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

std::string outcome_label(const std::vector<Index> &a) {
  std::string s;
  for (Index v : a) s += std::to_string(v);
  return s;
}

void emit_json(std::ostream &out, const json &j) { out << j.dump(2) << "\n"; }

ProtocolSpec load_protocol(const std::string &path) { return protocol_from_json(read_json_file(path)); }

SettingVector settings_for(const ProtocolSpec &spec, const std::string &text) {
  if (text.empty()) throw std::invalid_argument("--x is required");
  SettingVector x = parse_setting_tuple(text);
  if (static_cast<int>(x.values.size()) != spec.parties()) {
    throw std::invalid_argument("--x has " + std::to_string(x.values.size()) + " entries but the protocol has " +
                                std::to_string(spec.parties()) + " parties");
  }
  spec.check_settings(x);
  return x;
}

int cmd_simulate(const Options &o, std::ostream &out) {
  const ProtocolSpec spec = load_protocol(o.document);
  const SettingVector x = settings_for(spec, o.x);
  const OutcomeDistribution d = quantum_distribution(spec, x);
  if (o.format == "json") {
    json j = distribution_to_json(d);
    j["total"] = d.total();
    j["tolerance"] = kEndToEndTol;
    j["parse_mode"] = kParseMode;
    emit_json(out, j);
    return kExitPass;
  }
  out << "p(a|x) at x=" << to_string(x) << "\n";
  if (report_verbosity() >= 1) {
    for (Index i = 0; i < d.size(); ++i) out << "  a=" << outcome_label(d.outcomes_of(i)) << "  " << num(d.probs[i]) << "\n";
  }
  out << "total " << num(d.total()) << " (tolerance " << kEndToEndTol << ")\n";
  return kExitPass;
}

int cmd_extract(const Options &o, std::ostream &out) {
  const ProtocolSpec spec = load_protocol(o.document);
  const SettingVector x = settings_for(spec, o.x);
  const CausalModel m = extract_causal_model(spec, x);
  if (o.format != "text") {
    emit_json(out, causal_model_to_json(m));
    return kExitPass;
  }
  out << "causal model at x=" << to_string(x) << "\n";
  for (const auto &[h, t] : m.next_tables) {
    out << "  next after " << to_string(h) << (t.placeholder ? " (placeholder)" : "") << ":";
    for (int l = 1; l <= m.parties; ++l) {
      if (!h.contains(l)) out << " l=" << l << ":" << num(t.probs[l - 1]);
    }
    out << "\n";
  }
  for (const auto &[key, t] : m.result_tables) {
    out << "  result of party " << key.second << " after " << to_string(key.first)
        << (t.placeholder ? " (placeholder)" : "") << ":";
    for (std::size_t a = 0; a < t.probs.size(); ++a) out << " a=" << a << ":" << num(t.probs[a]);
    out << "\n";
  }
  out << "row normalization error " << num(max_row_normalization_error(m)) << " (tolerance " << kTableTol << ")\n";
  return kExitPass;
}

int cmd_verify(const Options &o, std::ostream &out) {
  const ProtocolSpec spec = load_protocol(o.document);
  const ValidityReport validity = validate_protocol(spec);
  if (!validity.valid) {
    if (o.format == "json") {
      emit_json(out, {{"check", "theorem1"}, {"pass", false}, {"validity", validity_to_json(validity)}});
    } else {
      out << "FAIL protocol is not valid: max flag leakage " << num(validity.max_leak) << " > " << kLeakTol << "\n";
    }
    return kExitCheckFailed;
  }
  const VerificationReport r = verify_theorem1(spec, o.allow_large);
  if (o.format == "json") {
    json j = verification_to_json(r);
    j["validity"] = validity_to_json(validity);
    emit_json(out, j);
  } else {
    if (report_verbosity() >= 2) {
      for (const auto &e : r.entries) {
        out << "  x=" << to_string(e.x) << " deviation " << num(e.max_deviation) << "\n";
      }
    }
    out << (r.pass ? "PASS" : "FAIL") << " quantum vs extracted causal distribution over " << r.entries.size()
        << " settings: max deviation " << num(r.max_deviation) << " (tolerance " << r.tolerance << ")\n";
  }
  return r.pass ? kExitPass : kExitCheckFailed;
}

int cmd_lemmas(const Options &o, std::ostream &out) {
  const ProtocolSpec spec = load_protocol(o.document);
  const ValidityReport validity = validate_protocol(spec);
  if (!validity.valid) {
    out << "FAIL protocol is not valid: max flag leakage " << num(validity.max_leak) << "\n";
    return kExitCheckFailed;
  }
  std::vector<SettingVector> xs;
  if (o.x.empty()) xs = all_settings(spec);
  else xs.push_back(settings_for(spec, o.x));
  bool pass = true;
  json reports = json::array();
  for (const auto &x : xs) {
    const ProofCheckReport r = run_proof_checks(spec, x, o.seed);
    pass = pass && r.pass();
    reports.push_back(proof_checks_to_json(r));
    if (o.format != "json" && report_verbosity() >= 1) {
      out << (r.pass() ? "PASS" : "FAIL") << " x=" << to_string(x) << " lemma1 " << num(r.lemma1_max_overlap)
          << " lemma2 " << num(r.lemma2_max_overlap) << " result1 " << num(r.result1_max_deviation) << " result2 "
          << num(r.result2_deviation) << " result3 " << num(r.result3_max_deviation) << " result4 "
          << num(r.result4_max_deviation) << (r.sampled ? " (sampled " : " (all ") << r.histories_checked << "/"
          << r.histories_total << " histories)\n";
    }
  }
  if (o.format == "json") {
    emit_json(out, {{"check", "proof_identities"}, {"pass", pass}, {"seed", o.seed}, {"reports", reports}});
  } else {
    out << (pass ? "PASS" : "FAIL") << " proof identities at " << xs.size() << " settings (overlap tolerance "
        << kOverlapTol << ", identity tolerance " << kEndToEndTol << ")\n";
  }
  return pass ? kExitPass : kExitCheckFailed;
}

int cmd_switch_demo(const Options &o, std::ostream &out) {
  const ProtocolSpec spec = build_switch_protocol();
  const SettingVector x{{0, 1, 1}};
  const ForwardSweep sweep(spec, x);
  const double p = quantum_distribution(spec, x)({0, 0, 0});
  const double pnc = naive_mixture_distribution(spec, x)({0, 0, 0});
  const History h0;
  const History alice({{1, 0, 0}});
  const History bob({{2, 0, 1}});
  const History alice_bob({{1, 0, 0}, {2, 0, 1}});
  const History bob_alice({{2, 0, 1}, {1, 0, 0}});
  auto get = [](const std::optional<double> &v) { return v ? *v : std::nan(""); };
  struct Row {
    std::string label;
    double value;
    double expected;
  };
  const std::vector<Row> rows = {
      {"p(000|011)", p, 5.0 / 16},
      {"naive p(000|011)", pnc, 3.0 / 16},
      {"p1(Alice|H0)", get(prob_next(sweep, h0, 1)), 0.5},
      {"p1(Bob|H0)", get(prob_next(sweep, h0, 2)), 0.5},
      {"p2(Bob|(1,0,0))", get(prob_next(sweep, alice, 2)), 1.0},
      {"p2(Alice|(2,0,1))", get(prob_next(sweep, bob, 1)), 1.0},
      {"p3(Charlie|(1,0,0),(2,0,1))", get(prob_next(sweep, alice_bob, 3)), 1.0},
      {"p3(Charlie|(2,0,1),(1,0,0))", get(prob_next(sweep, bob_alice, 3)), 1.0},
      {"p1(a=0|H0,x=0)", get(prob_result(sweep, h0, 1, 0)), 1.0},
      {"p1(b=0|H0,y=1)", get(prob_result(sweep, h0, 2, 0)), 0.5},
      {"p2(b=0|(1,0,0),y=1)", get(prob_result(sweep, alice, 2, 0)), 0.5},
      {"p2(a=0|(2,0,1),x=0)", get(prob_result(sweep, bob, 1, 0)), 0.5},
      {"p3(c=0|(1,0,0),(2,0,1),z=1)", get(prob_result(sweep, alice_bob, 3, 0)), 5.0 / 6},
      {"p3(c=0|(2,0,1),(1,0,0),z=1)", get(prob_result(sweep, bob_alice, 3, 0)), 5.0 / 6},
  };
  bool pass = true;
  json entries = json::array();
  for (const auto &r : rows) {
    const bool ok = std::abs(r.value - r.expected) <= kTableTol;
    pass = pass && ok;
    entries.push_back({{"quantity", r.label}, {"value", r.value}, {"expected", r.expected}, {"pass", ok}});
  }
  const VerificationReport v = verify_theorem1(spec);
  pass = pass && v.pass;
  if (o.format == "json") {
    emit_json(out, {{"check", "switch_demo"}, {"pass", pass}, {"tolerance", kTableTol}, {"values", entries},
                    {"theorem1", verification_to_json(v)}});
  } else {
    out << "quantum switch at x=(0,1,1)\n";
    for (const auto &r : rows) {
      const bool ok = std::abs(r.value - r.expected) <= kTableTol;
      if (report_verbosity() >= 1 || !ok) {
        out << "  " << (ok ? "ok  " : "FAIL") << " " << std::left << std::setw(30) << r.label << " " << num(r.value)
            << "  (expected " << num(r.expected) << ")\n";
      }
    }
    out << "  interference gap p - naive = " << num(p - pnc) << "\n";
    out << "  extracted model reproduces p at all 8 settings: max deviation " << num(v.max_deviation) << "\n";
    out << (pass ? "PASS" : "FAIL") << " switch demo (tolerance " << kTableTol << ")\n";
  }
  return pass ? kExitPass : kExitCheckFailed;
}

int cmd_rewrite(const Options &o, std::ostream &out, std::ostream &err) {
  const IndividualGateCircuit circuit = circuit_from_json(read_json_file(o.document));
  const RewriteResult r = rewrite_circuit(circuit);
  emit_json(out, protocol_to_json(r.spec, "rewritten from " + o.document));
  if (!r.fires_once) {
    err << "warning: some branch fires a party other than exactly once (max flag leakage " << num(r.max_leak)
        << "); the protocol is not valid\n";
    return kExitCheckFailed;
  }
  return kExitPass;
}

int cmd_polytope(const Options &o, std::ostream &out) {
  const DistributionFamily f = family_from_json(read_json_file(o.document));
  const auto vertices = enumerate_deterministic(f.scenario);
  const PolytopeCertificate cert = membership(f.behaviour, vertices);
  const Game game = guess_your_neighbours_input(f.scenario);
  const GameBound bound = causal_bound(f.scenario, game, vertices);
  const double score = game_score(f.scenario, f.behaviour, game);
  const bool certified = check_certificate(cert, f.behaviour, vertices);
  if (o.format == "json") {
    json j = certificate_to_json(cert);
    j["certificate_checked"] = certified;
    j["vertices"] = vertices.size();
    j["guess_your_neighbours_input"] = {{"score", score}, {"causal_bound", bound.value}};
    emit_json(out, j);
  } else {
    out << "vertices " << vertices.size() << "\n";
    out << "guess-your-neighbour's-input score " << num(score) << " (causal bound " << num(bound.value) << ")\n";
    if (cert.status == PolytopeCertificate::Status::kInside) {
      out << "INSIDE causal polytope: residual " << num(cert.residual) << " (tolerance " << kLpTol << ")\n";
    } else if (cert.status == PolytopeCertificate::Status::kOutside) {
      out << "OUTSIDE causal polytope: separating margin " << num(cert.margin) << "\n";
    } else {
      out << "INDETERMINATE: simplex stopped after " << cert.iterations << " iterations\n";
    }
  }
  if (cert.status == PolytopeCertificate::Status::kIndeterminate || !certified) return kExitIndeterminate;
  return cert.status == PolytopeCertificate::Status::kInside ? kExitPass : kExitCheckFailed;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"qcausal: simulate and verify quantum protocols with coherently controlled order"};
  app.require_subcommand(1);
  Options o;
  std::function<int()> action;

  auto add_format = [&o](CLI::App *sub) {
    sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  };
  auto *simulate = app.add_subcommand("simulate", "Print the outcome distribution at one setting vector");
  simulate->add_option("document", o.document, "Protocol document")->required();
  simulate->add_option("--x", o.x, "Setting tuple, e.g. 0,1,1")->required();
  add_format(simulate);
  simulate->callback([&] { action = [&] { return cmd_simulate(o, out); }; });

  auto *extract = app.add_subcommand("extract", "Emit the extracted causal model document");
  extract->add_option("document", o.document, "Protocol document")->required();
  extract->add_option("--x", o.x, "Setting tuple")->required();
  add_format(extract);
  extract->callback([&] { action = [&] { return cmd_extract(o, out); }; });

  auto *verify = app.add_subcommand("verify", "Compare quantum and extracted causal distributions at every setting");
  verify->add_option("document", o.document, "Protocol document")->required();
  verify->add_flag("--allow-large", o.allow_large, "Allow settings domains over 4096 combinations");
  add_format(verify);
  verify->callback([&] { action = [&] { return cmd_verify(o, out); }; });

  auto *lemmas = app.add_subcommand("lemmas", "Check the barred-state lemmas and the cancellation identities");
  lemmas->add_option("document", o.document, "Protocol document")->required();
  lemmas->add_option("--seed", o.seed, "Seed for history sampling");
  lemmas->add_option("--x", o.x, "Check one setting tuple instead of all");
  add_format(lemmas);
  lemmas->callback([&] { action = [&] { return cmd_lemmas(o, out); }; });

  auto *demo = app.add_subcommand("switch-demo", "Run the three-party quantum switch end to end");
  add_format(demo);
  demo->callback([&] { action = [&] { return cmd_switch_demo(o, out); }; });

  auto *rewrite = app.add_subcommand("rewrite", "Rewrite an individual-gate circuit as a protocol document");
  rewrite->add_option("document", o.document, "Circuit document")->required();
  rewrite->callback([&] { action = [&] { return cmd_rewrite(o, out, err); }; });

  auto *polytope = app.add_subcommand("polytope-check", "Test a two-party distribution for causal polytope membership");
  polytope->add_option("document", o.document, "Distribution document")->required();
  add_format(polytope);
  polytope->callback([&] { action = [&] { return cmd_polytope(o, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    return action();
  } catch (const InvalidProtocolError &e) {
    err << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const DocumentError &e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const StructuralError &e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const json::exception &e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const CapacityError &e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument &e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::out_of_range &e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::length_error &e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace qcausal
