#include "autobid/io.hpp"

#include "autobid/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace autobid {

using nlohmann::ordered_json;

namespace {

ordered_json parse(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

Rational rational_of(const ordered_json& j, const std::string& what) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const InputError&) {
      throw InputError(what + ": expected an exact rational string, got '" + j.get<std::string>() + "'");
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw InputError(what + ": expected an exact rational string");
}

const ordered_json& field(const ordered_json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return obj.at(key);
}

std::size_t count_of(const ordered_json& j, const std::string& what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long>() >= 0)) {
    throw InputError(what + " must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

std::vector<Rational> rational_array(const ordered_json& j, std::size_t size, const std::string& what) {
  if (!j.is_array() || j.size() != size) throw InputError(what + " must be an array of " + std::to_string(size));
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_of(x, what));
  return out;
}

std::vector<std::string> string_array(const ordered_json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw InputError(what + " must be an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

ordered_json instance_json(const Instance& inst) {
  ordered_json j;
  j["n"] = inst.n;
  j["k"] = inst.k;
  j["cap"] = to_string(inst.cap);
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < inst.n; ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t jj = 0; jj < inst.k; ++jj) row.push_back(to_string(inst.values(i, jj)));
    rows.push_back(row);
  }
  j["values"] = rows;
  ordered_json reserves = ordered_json::array();
  for (const auto& r : inst.reserves) reserves.push_back(to_string(r));
  j["reserves"] = reserves;
  ordered_json tau = ordered_json::array();
  for (const auto& t : inst.ros_targets) tau.push_back(to_string(t));
  j["tau"] = tau;
  ordered_json budgets = ordered_json::array();
  for (const auto& b : inst.budgets) budgets.push_back(b ? to_string(*b) : "inf");
  j["budgets"] = budgets;
  if (!inst.bidder_labels.empty() || !inst.item_labels.empty()) {
    j["labels"] = {{"bidders", inst.bidder_labels}, {"items", inst.item_labels}};
  }
  return j;
}

Instance instance_of(const ordered_json& j) {
  const std::size_t n = count_of(field(j, "n"), "n");
  const std::size_t k = count_of(field(j, "k"), "k");
  Instance inst = Instance::make(n, k, rational_of(field(j, "cap"), "cap"));
  const auto& values = field(j, "values");
  if (!values.is_array()) throw InputError("values must be an array");
  if (values.size() == n && (n == 0 || values.at(0).is_array())) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = rational_array(values.at(i), k, "values row " + std::to_string(i));
      for (std::size_t c = 0; c < k; ++c) inst.values(i, c) = row[c];
    }
  } else {
    const auto flat = rational_array(values, n * k, "values");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < k; ++c) inst.values(i, c) = flat[i * k + c];
    }
  }
  if (j.contains("reserves")) inst.reserves = rational_array(j.at("reserves"), k, "reserves");
  if (j.contains("tau")) inst.ros_targets = rational_array(j.at("tau"), n, "tau");
  if (j.contains("budgets")) {
    const auto& b = j.at("budgets");
    if (!b.is_array() || b.size() != n) throw InputError("budgets must be an array of " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (b.at(i).is_string() && b.at(i).get<std::string>() == "inf") inst.budgets[i] = std::nullopt;
      else inst.budgets[i] = rational_of(b.at(i), "budgets");
    }
  }
  if (j.contains("labels")) {
    const auto& l = j.at("labels");
    if (l.contains("bidders")) inst.bidder_labels = string_array(l.at("bidders"), "bidder labels");
    if (l.contains("items")) inst.item_labels = string_array(l.at("items"), "item labels");
  }
  inst.validate();
  return inst;
}

std::vector<std::string> vertex_names(const ordered_json& j, const std::string& prefix) {
  if (j.is_array()) return string_array(j, prefix);
  const std::size_t count = count_of(j, prefix);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace

std::string instance_to_json(const Instance& instance) { return instance_json(instance).dump(2) + "\n"; }

Instance instance_from_json(const std::string& text) {
  try {
    return instance_of(parse(text));
  } catch (const ordered_json::exception& e) {
    throw InputError(std::string("malformed instance: ") + e.what());
  }
}

std::string profile_to_json(const Profile& m) {
  ordered_json arr = ordered_json::array();
  for (const auto& x : m) arr.push_back(to_string(x));
  return ordered_json{{"m", arr}}.dump(2) + "\n";
}

Profile profile_from_json(const std::string& text) {
  const ordered_json j = parse(text);
  const ordered_json& arr = j.is_object() ? field(j, "m") : j;
  if (!arr.is_array()) throw InputError("profile must be an array of multipliers");
  return rational_array(arr, arr.size(), "profile");
}

std::string label_cover_to_json(const LabelCover& lc) {
  ordered_json j;
  j["V1"] = lc.left;
  j["V2"] = lc.right;
  j["sigma"] = lc.alphabet;
  ordered_json edges = ordered_json::array();
  for (const auto& e : lc.edges) edges.push_back(ordered_json::array({e.u, e.v, e.projection}));
  j["edges"] = edges;
  return j.dump(2) + "\n";
}

namespace {

// Edge endpoint given as an index or as a vertex name.
std::size_t endpoint(const ordered_json& x, const std::vector<std::string>& names, const std::string& what) {
  if (!x.is_string()) return count_of(x, what);
  const auto it = std::find(names.begin(), names.end(), x.get<std::string>());
  if (it == names.end()) throw InputError(what + " names unknown vertex '" + x.get<std::string>() + "'");
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

LabelCover label_cover_from_json(const std::string& text) {
  try {
    const ordered_json j = parse(text);
    LabelCover lc;
    lc.left = vertex_names(field(j, "V1"), "u");
    lc.right = vertex_names(field(j, "V2"), "v");
    lc.alphabet = count_of(field(j, "sigma"), "sigma");
    for (const auto& e : field(j, "edges")) {
      LabelCover::Edge edge;
      if (e.is_array()) {
        if (e.size() != 3) throw InputError("edges must be [u, v, projection]");
        edge.u = endpoint(e.at(0), lc.left, "edge u");
        edge.v = endpoint(e.at(1), lc.right, "edge v");
        for (const auto& s : e.at(2)) edge.projection.push_back(count_of(s, "projection"));
      } else {
        edge.u = endpoint(field(e, "u"), lc.left, "edge u");
        edge.v = endpoint(field(e, "v"), lc.right, "edge v");
        for (const auto& s : field(e, "projection")) edge.projection.push_back(count_of(s, "projection"));
      }
      lc.edges.push_back(std::move(edge));
    }
    lc.validate();
    return lc;
  } catch (const ordered_json::exception& e) {
    throw InputError(std::string("malformed label cover: ") + e.what());
  }
}

std::string cover_to_json(const CoverCSP& csp) {
  ordered_json j;
  j["variables"] = csp.variables;
  j["sigma"] = csp.alphabet;
  ordered_json clauses = ordered_json::array();
  for (const auto& c : csp.clauses) {
    ordered_json lits = ordered_json::array();
    for (const auto& l : c) lits.push_back(ordered_json::array({l.var, l.label}));
    clauses.push_back(lits);
  }
  j["clauses"] = clauses;
  return j.dump(2) + "\n";
}

CoverCSP cover_from_json(const std::string& text) {
  try {
    const ordered_json j = parse(text);
    CoverCSP csp;
    csp.variables = count_of(field(j, "variables"), "variables");
    csp.alphabet = count_of(field(j, "sigma"), "sigma");
    for (const auto& c : field(j, "clauses")) {
      std::vector<CoverCSP::Literal> lits;
      for (const auto& l : c) {
        if (!l.is_array() || l.size() != 2) throw InputError("literals must be [variable, label]");
        lits.push_back({count_of(l.at(0), "variable"), count_of(l.at(1), "label")});
      }
      csp.clauses.push_back(std::move(lits));
    }
    csp.validate();
    return csp;
  } catch (const ordered_json::exception& e) {
    throw InputError(std::string("malformed cover CSP: ") + e.what());
  }
}

std::string compiled_to_json(const CompiledInstance& compiled) {
  ordered_json j = instance_json(compiled.instance);
  ordered_json bidders = ordered_json::object();
  for (std::size_t i = 0; i < compiled.instance.bidder_labels.size(); ++i) bidders[compiled.instance.bidder_labels[i]] = i;
  ordered_json items = ordered_json::object();
  for (std::size_t c = 0; c < compiled.instance.item_labels.size(); ++c) items[compiled.instance.item_labels[c]] = c;
  j["roles"] = {{"bidders", bidders}, {"items", items}};
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : compiled.params) params[k] = v;
  j["params"] = params;
  ordered_json stages = ordered_json::array();
  for (const auto& s : compiled.stages) stages.push_back({{"name", s.name}, {"bidders", s.bidders}, {"items", s.items}});
  j["stages"] = stages;
  j["vertices"] = compiled.vertices;
  j["alphabet"] = compiled.alphabet;
  return j.dump(2) + "\n";
}

CompiledInstance compiled_from_json(const std::string& text) {
  try {
    const ordered_json j = parse(text);
    CompiledInstance c;
    c.instance = instance_of(j);
    const auto& roles = field(j, "roles");
    for (const auto& [role, idx] : field(roles, "bidders").items()) {
      const std::size_t i = count_of(idx, "role index");
      if (i >= c.instance.n) throw InputError("bidder role index out of range");
      c.bidder_roles[role] = i;
    }
    for (const auto& [role, idx] : field(roles, "items").items()) {
      const std::size_t i = count_of(idx, "role index");
      if (i >= c.instance.k) throw InputError("item role index out of range");
      c.item_roles[role] = i;
    }
    if (j.contains("params")) {
      for (const auto& [k, v] : j.at("params").items()) c.params.emplace_back(k, v.get<std::string>());
    }
    if (j.contains("stages")) {
      for (const auto& s : j.at("stages")) {
        c.stages.push_back(Stage{s.at("name").get<std::string>(), count_of(s.at("bidders"), "stage bidders"),
                                 count_of(s.at("items"), "stage items")});
      }
    }
    if (j.contains("vertices")) c.vertices = string_array(j.at("vertices"), "vertices");
    if (j.contains("alphabet")) c.alphabet = count_of(j.at("alphabet"), "alphabet");
    for (std::size_t t = 0; t < c.instance.k; ++t) {
      if (sgn(c.instance.reserves[t]) > 0) c.reserve_registry.push_back({t, c.instance.reserves[t]});
    }
    return c;
  } catch (const ordered_json::exception& e) {
    throw InputError(std::string("malformed compiled instance: ") + e.what());
  }
}

bool is_compiled_json(const std::string& text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    return j.is_object() && j.contains("roles");
  } catch (const ordered_json::exception&) {
    return false;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << contents;
    if (!out) throw InputError("cannot write '" + path + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw InputError("cannot move output into '" + path + "'");
}

}  // namespace autobid
