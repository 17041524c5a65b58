#include "autobid/io.hpp"

#include "autobid/errors.hpp"

#include <map>
#include <sstream>

namespace autobid {

namespace {

const char* kColumns = "round,bidder,multiplier,value,spend,ratio,multiplier_exact,value_exact,spend_exact,ratio_exact";

std::string policy_name(AllocationPolicy p) { return p == AllocationPolicy::equal_split ? "equal-split" : "ros-binding"; }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::size_t parse_index(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError(what + " must be a nonnegative integer, got '" + s + "'");
  }
  return std::stoull(s);
}

}  // namespace

std::string trace_to_csv(const SequenceTrace& trace, const std::string& rule_note) {
  std::ostringstream out;
  const std::size_t n = trace.T() ? trace.rounds[0].m.size() : 0;
  out << "# policy=" << policy_name(trace.policy) << " T=" << trace.T() << " n=" << n;
  if (!rule_note.empty()) out << " " << rule_note;
  out << "\n" << kColumns << "\n";
  for (std::size_t t = 0; t < trace.T(); ++t) {
    const auto& rec = trace.rounds[t];
    for (std::size_t i = 0; i < rec.m.size(); ++i) {
      const Extended r = trace.ratio(t, i);
      out << t + 1 << "," << i << "," << to_decimal(rec.m[i]) << "," << to_decimal(rec.value[i]) << ","
          << to_decimal(rec.spend[i]) << "," << r.decimal() << "," << to_string(rec.m[i]) << ","
          << to_string(rec.value[i]) << "," << to_string(rec.spend[i]) << "," << r.str() << "\n";
    }
  }
  return out.str();
}

SequenceTrace trace_from_csv(const Instance& instance, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  AllocationPolicy policy = AllocationPolicy::equal_split;
  bool saw_columns = false;
  std::map<std::size_t, std::map<std::size_t, std::vector<std::string>>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      for (const auto& tok : split(line.substr(1), ' ')) {
        if (tok == "policy=ros-binding") policy = AllocationPolicy::ros_binding;
        else if (tok == "policy=equal-split") policy = AllocationPolicy::equal_split;
      }
      continue;
    }
    if (!saw_columns) {
      if (line != kColumns) throw InputError("unexpected trace header '" + line + "'");
      saw_columns = true;
      continue;
    }
    auto cells = split(line, ',');
    if (cells.size() != 10) throw InputError("trace rows need 10 columns");
    const std::size_t t = parse_index(cells[0], "round");
    const std::size_t i = parse_index(cells[1], "bidder");
    if (t == 0 || i >= instance.n) throw InputError("trace row index out of range");
    if (!rows[t].emplace(i, std::move(cells)).second) throw InputError("duplicate trace row");
  }
  if (rows.empty()) throw InputError("trace has no rounds");
  std::vector<Profile> profiles;
  std::size_t expect = 1;
  for (const auto& [t, bidders] : rows) {
    if (t != expect++) throw InputError("trace rounds must be consecutive from 1");
    if (bidders.size() != instance.n) throw InputError("round " + std::to_string(t) + " lacks some bidders");
    Profile m;
    for (const auto& [i, cells] : bidders) m.push_back(parse_rational(cells[6]));
    profiles.push_back(std::move(m));
  }
  SequenceTrace trace = make_trace(instance, profiles, policy);
  for (const auto& [t, bidders] : rows) {
    for (const auto& [i, cells] : bidders) {
      const auto& rec = trace.rounds[t - 1];
      if (parse_rational(cells[7]) != rec.value[i] || parse_rational(cells[8]) != rec.spend[i]) {
        throw InputError("round " + std::to_string(t) + " bidder " + std::to_string(i) +
                         ": recorded value or spend disagrees with the replayed auction");
      }
    }
  }
  return trace;
}

}  // namespace autobid
