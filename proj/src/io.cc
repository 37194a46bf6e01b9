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

#include "qcausal/io.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace qcausal {

namespace {

std::string at(const std::string &where, const std::string &key) { return where + "/" + key; }
std::string at(const std::string &where, std::size_t i) { return where + "/" + std::to_string(i); }

void expect_object(const json &j, const std::string &where, const std::set<std::string> &required,
                   const std::set<std::string> &optional = {}) {
  if (!j.is_object()) throw DocumentError(where.empty() ? "/" : where, "expected an object");
  for (const auto &key : required) {
    if (!j.contains(key)) throw DocumentError(where.empty() ? "/" : where, "missing field \"" + key + "\"");
  }
  for (const auto &[key, value] : j.items()) {
    if (!required.count(key) && !optional.count(key)) {
      throw DocumentError(at(where, key), "unknown field \"" + key + "\"");
    }
  }
}

const json &expect_array(const json &j, const std::string &where) {
  if (!j.is_array()) throw DocumentError(where, "expected an array");
  return j;
}

Index get_index(const json &j, const std::string &where) {
  if (!j.is_number_integer()) throw DocumentError(where, "expected an integer");
  return j.get<Index>();
}

int get_int(const json &j, const std::string &where) { return static_cast<int>(get_index(j, where)); }

double get_double(const json &j, const std::string &where) {
  if (!j.is_number()) throw DocumentError(where, "expected a number");
  return j.get<double>();
}

std::string get_string(const json &j, const std::string &where) {
  if (!j.is_string()) throw DocumentError(where, "expected a string");
  return j.get<std::string>();
}

void expect_format(const json &j, const char *format) {
  if (!j.is_object() || !j.contains("format")) throw DocumentError("/", "missing field \"format\"");
  const std::string f = get_string(j["format"], "/format");
  if (f != format) throw DocumentError("/format", "expected \"" + std::string(format) + "\", got \"" + f + "\"");
}

std::vector<Index> index_list(const json &j, const std::string &where) {
  expect_array(j, where);
  std::vector<Index> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_index(j[i], at(where, i)));
  return out;
}

std::vector<Settings> settings_domains(const json &j, const std::string &where) {
  expect_array(j, where);
  std::vector<Settings> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    Settings dom;
    for (Index v : index_list(j[i], at(where, i))) dom.push_back(static_cast<int>(v));
    out.push_back(std::move(dom));
  }
  return out;
}

json table_to_json(const std::vector<double> &probs) { return json(probs); }

std::vector<double> doubles(const json &j, const std::string &where) {
  expect_array(j, where);
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_double(j[i], at(where, i)));
  return out;
}

COperator named_step_gate(const json &j, const SpaceLayout &layout, const std::string &where) {
  const std::string name = get_string(j["gate"], at(where, "gate"));
  const Index sc = layout.system_dim * layout.control_dim();
  if (name == "identity") {
    expect_object(j, where, {"gate"});
    return COperator::Identity(sc, sc);
  }
  if (name == "control_permutation") {
    expect_object(j, where, {"gate", "perm"});
    std::vector<int> perm;
    for (Index v : index_list(j["perm"], at(where, "perm"))) perm.push_back(static_cast<int>(v));
    try {
      return control_permutation(layout, perm);
    } catch (const std::exception &e) {
      throw DocumentError(at(where, "perm"), e.what());
    }
  }
  if (name == "controlled") {
    expect_object(j, where, {"gate", "blocks"});
    const json &blocks = expect_array(j["blocks"], at(where, "blocks"));
    if (static_cast<Index>(blocks.size()) > layout.control_dim()) {
      throw DocumentError(at(where, "blocks"), "more blocks than control levels");
    }
    std::vector<COperator> mats;
    for (std::size_t c = 0; c < blocks.size(); ++c) {
      if (blocks[c].is_null()) mats.emplace_back();
      else mats.push_back(matrix_from_json(blocks[c], layout.system_dim, at(at(where, "blocks"), c)));
    }
    return control_conditioned(layout, mats);
  }
  throw DocumentError(at(where, "gate"), "unknown gate \"" + name + "\"");
}

COperator circuit_gate(const std::string &name, const std::string &where) {
  if (name == "X") return gate_x();
  if (name == "H") return gate_h();
  if (name == "CNOT") return gate_cnot();
  if (name == "SWAP") return gate_swap();
  throw DocumentError(where, "unknown gate \"" + name + "\" (expected X, H, CNOT or SWAP)");
}

}  // namespace

json parse_json_text(const std::string &text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw DocumentError("byte " + std::to_string(e.byte), "malformed JSON");
  }
}

json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DocumentError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_json_text(ss.str());
  } catch (const DocumentError &e) {
    throw DocumentError(path + " " + e.where(), "malformed JSON");
  }
}

json matrix_to_json(const COperator &m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(json::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

COperator matrix_from_json(const json &j, Index dim, const std::string &where) {
  expect_array(j, where);
  if (static_cast<Index>(j.size()) != dim) {
    throw DocumentError(where, "expected " + std::to_string(dim) + " rows, got " + std::to_string(j.size()));
  }
  COperator m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const std::string rw = at(where, static_cast<std::size_t>(i));
    const json &row = expect_array(j[i], rw);
    if (static_cast<Index>(row.size()) != dim) {
      throw DocumentError(rw, "expected " + std::to_string(dim) + " entries, got " + std::to_string(row.size()));
    }
    for (Index k = 0; k < dim; ++k) {
      const std::string ew = at(rw, static_cast<std::size_t>(k));
      const json &e = row[k];
      if (!e.is_array() || e.size() != 2) throw DocumentError(ew, "expected a [re, im] pair");
      m(i, k) = cplx(get_double(e[0], at(ew, 0)), get_double(e[1], at(ew, 1)));
    }
  }
  return m;
}

json protocol_to_json(const ProtocolSpec &spec, const std::string &description) {
  json j;
  j["format"] = kProtocolFormat;
  if (!description.empty()) j["description"] = description;
  j["system_dim"] = spec.layout.system_dim;
  j["parties"] = spec.parties();
  j["alphabets"] = spec.layout.alphabets;
  j["flag_dim"] = spec.layout.flag_dim;
  j["steps"] = spec.steps;
  j["settings"] = spec.settings;
  j["step_unitaries"] = json::array();
  for (const auto &u : spec.step_unitaries) j["step_unitaries"].push_back(matrix_to_json(u));
  j["measurements"] = json::array();
  for (const auto &per_party : spec.measurements) {
    json row = json::array();
    for (const auto &m : per_party) row.push_back(matrix_to_json(m));
    j["measurements"].push_back(std::move(row));
  }
  return j;
}

ProtocolSpec protocol_from_json(const json &j) {
  expect_format(j, kProtocolFormat);
  expect_object(j, "", {"format", "system_dim", "parties", "alphabets", "steps", "settings", "step_unitaries",
                        "measurements"},
                {"description", "flag_dim"});
  ProtocolSpec spec;
  const Index ds = get_index(j["system_dim"], "/system_dim");
  const int n = get_int(j["parties"], "/parties");
  const auto alphabets = index_list(j["alphabets"], "/alphabets");
  if (static_cast<int>(alphabets.size()) != n) {
    throw DocumentError("/alphabets", "expected " + std::to_string(n) + " alphabets, one per party");
  }
  spec.steps = get_int(j["steps"], "/steps");
  const Index flag_dim = j.contains("flag_dim") ? get_index(j["flag_dim"], "/flag_dim") : spec.steps + 1;
  try {
    spec.layout = SpaceLayout::make(ds, alphabets, flag_dim);
  } catch (const std::exception &e) {
    throw DocumentError("/", e.what());
  }
  spec.settings = settings_domains(j["settings"], "/settings");
  if (static_cast<int>(spec.settings.size()) != n) {
    throw DocumentError("/settings", "expected one settings domain per party");
  }
  const json &steps = expect_array(j["step_unitaries"], "/step_unitaries");
  const Index sc = ds * spec.layout.control_dim();
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const std::string w = at("/step_unitaries", t);
    if (steps[t].is_object() && steps[t].contains("gate")) spec.step_unitaries.push_back(named_step_gate(steps[t], spec.layout, w));
    else spec.step_unitaries.push_back(matrix_from_json(steps[t], sc, w));
  }
  const json &meas = expect_array(j["measurements"], "/measurements");
  if (static_cast<int>(meas.size()) != n) throw DocumentError("/measurements", "expected one list per party");
  spec.measurements.resize(n);
  for (int l = 0; l < n; ++l) {
    const std::string pw = at("/measurements", static_cast<std::size_t>(l));
    const json &per = expect_array(meas[l], pw);
    if (per.size() != spec.settings[l].size()) throw DocumentError(pw, "expected one measurement per setting");
    const Index dim = ds * alphabets[l];
    for (std::size_t k = 0; k < per.size(); ++k) {
      const std::string w = at(pw, k);
      if (per[k].is_object()) {
        expect_object(per[k], w, {"gate"});
        if (get_string(per[k]["gate"], at(w, "gate")) != "identity") {
          throw DocumentError(at(w, "gate"), "measurements accept only the \"identity\" named gate");
        }
        spec.measurements[l].push_back(COperator::Identity(dim, dim));
      } else {
        spec.measurements[l].push_back(matrix_from_json(per[k], dim, w));
      }
    }
  }
  check_structure(spec);
  return spec;
}

json circuit_to_json(const IndividualGateCircuit &c, const std::string &description) {
  auto name = [&c](int w) {
    return w < static_cast<int>(c.wire_names.size()) && !c.wire_names[w].empty() ? c.wire_names[w]
                                                                                  : "w" + std::to_string(w);
  };
  json j;
  j["format"] = kCircuitFormat;
  if (!description.empty()) j["description"] = description;
  j["wires"] = json::array();
  for (std::size_t w = 0; w < c.wire_dims.size(); ++w) {
    j["wires"].push_back({{"name", name(static_cast<int>(w))}, {"dim", c.wire_dims[w]}});
  }
  j["alphabets"] = c.alphabets;
  j["settings"] = c.settings;
  j["lab_wires"] = json::array();
  for (const auto &lw : c.lab_wires) {
    json names = json::array();
    for (int w : lw) names.push_back(name(w));
    j["lab_wires"].push_back(std::move(names));
  }
  j["measurements"] = json::array();
  for (const auto &per : c.measurements) {
    json row = json::array();
    for (const auto &m : per) row.push_back(matrix_to_json(m));
    j["measurements"].push_back(std::move(row));
  }
  j["elements"] = json::array();
  for (const auto &e : c.elements) {
    if (e.kind == IndividualGateCircuit::Element::Kind::kLabGate) {
      j["elements"].push_back({{"op", "lab"}, {"party", e.party}, {"control", name(e.wires[0])}});
    } else {
      json names = json::array();
      for (int w : e.wires) names.push_back(name(w));
      j["elements"].push_back({{"op", "unitary"}, {"wires", names}, {"matrix", matrix_to_json(e.matrix)}});
    }
  }
  return j;
}

IndividualGateCircuit circuit_from_json(const json &j) {
  expect_format(j, kCircuitFormat);
  expect_object(j, "", {"format", "wires", "alphabets", "settings", "lab_wires", "measurements", "elements"},
                {"description"});
  IndividualGateCircuit c;
  std::map<std::string, int> by_name;
  const json &wires = expect_array(j["wires"], "/wires");
  for (std::size_t w = 0; w < wires.size(); ++w) {
    const std::string ww = at("/wires", w);
    expect_object(wires[w], ww, {"name", "dim"});
    const std::string name = get_string(wires[w]["name"], at(ww, "name"));
    if (!by_name.emplace(name, static_cast<int>(w)).second) throw DocumentError(at(ww, "name"), "duplicate wire name");
    c.wire_names.push_back(name);
    c.wire_dims.push_back(get_index(wires[w]["dim"], at(ww, "dim")));
  }
  auto wire = [&by_name](const json &v, const std::string &where) {
    const std::string name = get_string(v, where);
    auto it = by_name.find(name);
    if (it == by_name.end()) throw DocumentError(where, "undeclared wire \"" + name + "\"");
    return it->second;
  };
  auto wire_list = [&](const json &v, const std::string &where) {
    expect_array(v, where);
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(wire(v[i], at(where, i)));
    return out;
  };
  auto dim_of = [&c](const std::vector<int> &ws) {
    Index d = 1;
    for (int w : ws) d *= c.wire_dims[w];
    return d;
  };
  c.alphabets = index_list(j["alphabets"], "/alphabets");
  const int n = c.parties();
  c.settings = settings_domains(j["settings"], "/settings");
  if (static_cast<int>(c.settings.size()) != n) throw DocumentError("/settings", "expected one domain per party");
  const json &lab = expect_array(j["lab_wires"], "/lab_wires");
  if (static_cast<int>(lab.size()) != n) throw DocumentError("/lab_wires", "expected one wire list per party");
  for (int l = 0; l < n; ++l) c.lab_wires.push_back(wire_list(lab[l], at("/lab_wires", static_cast<std::size_t>(l))));
  const json &meas = expect_array(j["measurements"], "/measurements");
  if (static_cast<int>(meas.size()) != n) throw DocumentError("/measurements", "expected one list per party");
  c.measurements.resize(n);
  for (int l = 0; l < n; ++l) {
    const std::string pw = at("/measurements", static_cast<std::size_t>(l));
    const json &per = expect_array(meas[l], pw);
    for (std::size_t k = 0; k < per.size(); ++k) {
      c.measurements[l].push_back(matrix_from_json(per[k], dim_of(c.lab_wires[l]) * c.alphabets[l], at(pw, k)));
    }
  }
  const json &elements = expect_array(j["elements"], "/elements");
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const std::string ew = at("/elements", k);
    if (!elements[k].is_object() || !elements[k].contains("op")) throw DocumentError(ew, "missing field \"op\"");
    const std::string op = get_string(elements[k]["op"], at(ew, "op"));
    if (op == "lab") {
      expect_object(elements[k], ew, {"op", "party", "control"});
      c.add_lab_gate(get_int(elements[k]["party"], at(ew, "party")), wire(elements[k]["control"], at(ew, "control")));
    } else if (op == "gate") {
      expect_object(elements[k], ew, {"op", "name", "wires"});
      const auto ws = wire_list(elements[k]["wires"], at(ew, "wires"));
      COperator m = circuit_gate(get_string(elements[k]["name"], at(ew, "name")), at(ew, "name"));
      if (dim_of(ws) != m.rows()) throw DocumentError(at(ew, "wires"), "gate does not fit the listed wires");
      c.add_unitary(ws, std::move(m));
    } else if (op == "unitary") {
      expect_object(elements[k], ew, {"op", "wires", "matrix"});
      const auto ws = wire_list(elements[k]["wires"], at(ew, "wires"));
      c.add_unitary(ws, matrix_from_json(elements[k]["matrix"], dim_of(ws), at(ew, "matrix")));
    } else {
      throw DocumentError(at(ew, "op"), "unknown op \"" + op + "\" (expected unitary, gate or lab)");
    }
  }
  check_circuit(c);
  return c;
}

json history_to_json(const History &h) {
  json j = json::array();
  for (const auto &e : h.entries()) j.push_back(json::array({e.party, e.outcome, e.setting}));
  return j;
}

History history_from_json(const json &j, const std::string &where) {
  expect_array(j, where);
  std::vector<HistoryEntry> entries;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = at(where, i);
    if (!j[i].is_array() || j[i].size() != 3) throw DocumentError(w, "expected a [party, outcome, setting] triple");
    entries.push_back({get_int(j[i][0], at(w, 0)), get_index(j[i][1], at(w, 1)), get_int(j[i][2], at(w, 2))});
  }
  return History(std::move(entries));
}

json settings_to_json(const SettingVector &x) { return json(x.values); }

SettingVector settings_from_json(const json &j, const std::string &where) {
  SettingVector x;
  for (Index v : index_list(j, where)) x.values.push_back(static_cast<int>(v));
  return x;
}

SettingVector parse_setting_tuple(const std::string &text) {
  SettingVector x;
  const bool separated = text.find(',') != std::string::npos;
  std::string token;
  auto flush = [&]() {
    if (token.empty()) throw std::invalid_argument("empty entry in setting tuple \"" + text + "\"");
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used != token.size()) throw std::invalid_argument("bad entry \"" + token + "\" in setting tuple");
    x.values.push_back(v);
    token.clear();
  };
  for (char ch : text) {
    if (ch == ' ' || ch == '(' || ch == ')') continue;
    if (separated && ch == ',') {
      flush();
    } else if (!separated) {
      token = std::string(1, ch);
      flush();
    } else {
      token += ch;
    }
  }
  if (separated) flush();
  if (x.values.empty()) throw std::invalid_argument("empty setting tuple");
  return x;
}

json causal_model_to_json(const CausalModel &m) {
  json j;
  j["format"] = kCausalModelFormat;
  j["parties"] = m.parties;
  j["alphabets"] = m.alphabets;
  j["x"] = settings_to_json(m.x);
  j["next_tables"] = json::array();
  for (const auto &[h, t] : m.next_tables) {
    j["next_tables"].push_back({{"history", history_to_json(h)}, {"probs", table_to_json(t.probs)},
                                {"placeholder", t.placeholder}});
  }
  j["result_tables"] = json::array();
  for (const auto &[key, t] : m.result_tables) {
    j["result_tables"].push_back({{"history", history_to_json(key.first)}, {"party", key.second},
                                  {"probs", table_to_json(t.probs)}, {"placeholder", t.placeholder}});
  }
  j["reachable"] = json::array();
  for (const auto &h : m.reachable) j["reachable"].push_back(history_to_json(h));
  j["max_clamp"] = m.max_clamp;
  return j;
}

CausalModel causal_model_from_json(const json &j) {
  expect_format(j, kCausalModelFormat);
  expect_object(j, "", {"format", "parties", "alphabets", "x", "next_tables", "result_tables", "reachable"},
                {"max_clamp"});
  CausalModel m;
  m.parties = get_int(j["parties"], "/parties");
  m.alphabets = index_list(j["alphabets"], "/alphabets");
  m.x = settings_from_json(j["x"], "/x");
  const json &next = expect_array(j["next_tables"], "/next_tables");
  for (std::size_t i = 0; i < next.size(); ++i) {
    const std::string w = at("/next_tables", i);
    expect_object(next[i], w, {"history", "probs", "placeholder"});
    NextTable t{doubles(next[i]["probs"], at(w, "probs")), next[i]["placeholder"].get<bool>()};
    m.next_tables.emplace(history_from_json(next[i]["history"], at(w, "history")), std::move(t));
  }
  const json &res = expect_array(j["result_tables"], "/result_tables");
  for (std::size_t i = 0; i < res.size(); ++i) {
    const std::string w = at("/result_tables", i);
    expect_object(res[i], w, {"history", "party", "probs", "placeholder"});
    ResultTable t{doubles(res[i]["probs"], at(w, "probs")), res[i]["placeholder"].get<bool>()};
    m.result_tables.emplace(std::make_pair(history_from_json(res[i]["history"], at(w, "history")),
                                           get_int(res[i]["party"], at(w, "party"))),
                            std::move(t));
  }
  const json &reach = expect_array(j["reachable"], "/reachable");
  for (std::size_t i = 0; i < reach.size(); ++i) m.reachable.push_back(history_from_json(reach[i], at("/reachable", i)));
  if (j.contains("max_clamp")) m.max_clamp = get_double(j["max_clamp"], "/max_clamp");
  return m;
}

json distribution_to_json(const OutcomeDistribution &d) {
  return {{"x", settings_to_json(d.x)}, {"alphabets", d.alphabets}, {"probs", d.probs}};
}

json family_to_json(const Scenario &scenario, const std::vector<Settings> &settings, const Behaviour &p) {
  json j;
  j["format"] = kDistributionFormat;
  j["alphabets"] = scenario.alphabets;
  j["settings"] = settings;
  j["distributions"] = json::array();
  Index x_flat = 0;
  std::vector<int> idx(settings.size(), 0);
  for (;;) {
    std::vector<int> x;
    for (std::size_t l = 0; l < settings.size(); ++l) x.push_back(settings[l][idx[l]]);
    std::vector<double> probs(p.data() + scenario.entry(x_flat, 0),
                              p.data() + scenario.entry(x_flat, 0) + scenario.outcome_count());
    j["distributions"].push_back({{"x", x}, {"probs", probs}});
    ++x_flat;
    int l = static_cast<int>(settings.size()) - 1;
    while (l >= 0 && ++idx[l] == static_cast<int>(settings[l].size())) idx[l--] = 0;
    if (l < 0) break;
  }
  return j;
}

DistributionFamily family_from_json(const json &j) {
  expect_format(j, kDistributionFormat);
  expect_object(j, "", {"format", "alphabets", "settings", "distributions"}, {"description"});
  DistributionFamily f;
  f.scenario.alphabets = index_list(j["alphabets"], "/alphabets");
  f.settings = settings_domains(j["settings"], "/settings");
  if (f.settings.size() != f.scenario.alphabets.size()) {
    throw DocumentError("/settings", "expected one settings domain per party");
  }
  for (const auto &dom : f.settings) f.scenario.setting_counts.push_back(static_cast<Index>(dom.size()));
  f.behaviour = Behaviour::Constant(f.scenario.dim(), std::numeric_limits<double>::quiet_NaN());
  const json &dists = expect_array(j["distributions"], "/distributions");
  if (static_cast<Index>(dists.size()) != f.scenario.setting_count()) {
    throw DocumentError("/distributions", "expected " + std::to_string(f.scenario.setting_count()) +
                                              " distributions, one per setting vector");
  }
  std::set<Index> seen;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    const std::string w = at("/distributions", i);
    expect_object(dists[i], w, {"x", "probs"});
    const SettingVector x = settings_from_json(dists[i]["x"], at(w, "x"));
    if (x.values.size() != f.settings.size()) throw DocumentError(at(w, "x"), "wrong number of settings");
    Index x_flat = 0;
    for (std::size_t l = 0; l < f.settings.size(); ++l) {
      auto it = std::find(f.settings[l].begin(), f.settings[l].end(), x.values[l]);
      if (it == f.settings[l].end()) throw DocumentError(at(w, "x"), "setting outside its domain");
      x_flat = x_flat * static_cast<Index>(f.settings[l].size()) + (it - f.settings[l].begin());
    }
    if (!seen.insert(x_flat).second) throw DocumentError(at(w, "x"), "duplicate setting vector");
    const auto probs = doubles(dists[i]["probs"], at(w, "probs"));
    if (static_cast<Index>(probs.size()) != f.scenario.outcome_count()) {
      throw DocumentError(at(w, "probs"), "expected " + std::to_string(f.scenario.outcome_count()) + " entries");
    }
    for (std::size_t a = 0; a < probs.size(); ++a) f.behaviour[f.scenario.entry(x_flat, a)] = probs[a];
  }
  return f;
}

json certificate_to_json(const PolytopeCertificate &c) {
  json j;
  j["format"] = kCertificateFormat;
  j["status"] = to_string(c.status);
  j["iterations"] = c.iterations;
  j["tolerance"] = kLpTol;
  if (c.status == PolytopeCertificate::Status::kInside) {
    json w = json::array();
    for (std::size_t k = 0; k < c.weights.size(); ++k) {
      if (c.weights[k] > 0) w.push_back({{"vertex", k}, {"weight", c.weights[k]}});
    }
    j["weights"] = w;
    j["residual"] = c.residual;
  } else if (c.status == PolytopeCertificate::Status::kOutside) {
    j["functional"] = std::vector<double>(c.functional.data(), c.functional.data() + c.functional.size());
    j["offset"] = c.offset;
    j["margin"] = c.margin;
  }
  return j;
}

json verification_to_json(const VerificationReport &r) {
  json j;
  j["check"] = "theorem1";
  j["pass"] = r.pass;
  j["max_deviation"] = r.max_deviation;
  j["tolerance"] = r.tolerance;
  j["parse_mode"] = kParseMode;
  j["entries"] = json::array();
  for (const auto &e : r.entries) {
    j["entries"].push_back({{"x", settings_to_json(e.x)}, {"max_deviation", e.max_deviation},
                            {"quantum_total", e.quantum_total}, {"causal_total", e.causal_total},
                            {"max_clamp", e.max_clamp}});
  }
  return j;
}

json proof_checks_to_json(const ProofCheckReport &r) {
  return {{"x", settings_to_json(r.x)},
          {"pass", r.pass()},
          {"lemma1_max_overlap", r.lemma1_max_overlap},
          {"lemma2_max_overlap", r.lemma2_max_overlap},
          {"result1_max_deviation", r.result1_max_deviation},
          {"result2_deviation", r.result2_deviation},
          {"result3_max_deviation", r.result3_max_deviation},
          {"result4_max_deviation", r.result4_max_deviation},
          {"overlap_tolerance", kOverlapTol},
          {"identity_tolerance", kEndToEndTol},
          {"histories_total", r.histories_total},
          {"histories_checked", r.histories_checked},
          {"sampled", r.sampled},
          {"sample_seed", r.sample_seed}};
}

json validity_to_json(const ValidityReport &r) {
  json j;
  j["valid"] = r.valid;
  j["max_leak"] = r.max_leak;
  j["max_wrap_amplitude"] = r.max_wrap_amplitude;
  j["tolerance"] = kLeakTol;
  j["entries"] = json::array();
  for (const auto &e : r.entries) {
    j["entries"].push_back({{"x", settings_to_json(e.x)}, {"leak", e.leak}, {"wrap_amplitude", e.wrap_amplitude}});
  }
  return j;
}

}  // namespace qcausal
