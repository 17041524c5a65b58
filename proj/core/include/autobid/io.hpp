#pragma once

#include "autobid/cover.hpp"
#include "autobid/gadgets.hpp"
#include "autobid/label_cover.hpp"
#include "autobid/learning.hpp"
#include "autobid/model.hpp"

#include <string>

namespace autobid {

/// All numbers are exact rational strings ("p/q" or "p"); decimals are
/// rejected with InputError. Budgets use "inf" for +infinity.
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);

/// JSON object {"m": [...]} or a bare array.
std::string profile_to_json(const Profile& m);
Profile profile_from_json(const std::string& text);

/// {"V1": [...], "V2": [...], "sigma": S, "edges": [[u, v, [proj...]], ...]}.
/// V1/V2 may also be vertex counts, named "u<i>" / "v<i>".
std::string label_cover_to_json(const LabelCover& lc);
LabelCover label_cover_from_json(const std::string& text);

/// {"variables": d, "sigma": S, "clauses": [[[var, label], ...], ...]}.
std::string cover_to_json(const CoverCSP& csp);
CoverCSP cover_from_json(const std::string& text);

/// Instance format plus "roles", "params", "stages", "vertices", "alphabet".
std::string compiled_to_json(const CompiledInstance& compiled);
CompiledInstance compiled_from_json(const std::string& text);

/// True when the JSON object carries a "roles" table.
bool is_compiled_json(const std::string& text);

/// One row per (round, bidder): multiplier, round value, round spend and the
/// cumulative ratio, each as a decimal and an exact column. A leading
/// "# key=value ..." line records the allocation policy and rule.
std::string trace_to_csv(const SequenceTrace& trace, const std::string& rule_note = "");

/// Rebuilds a trace by replaying the recorded multipliers. Throws InputError
/// when recorded values or spends disagree with the replay.
SequenceTrace trace_from_csv(const Instance& instance, const std::string& text);

std::string read_file(const std::string& path);
/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace autobid
