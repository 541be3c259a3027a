#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ulam/adversary.hpp"
#include "ulam/constants.hpp"
#include "ulam/recurrence.hpp"
#include "ulam/shadowing.hpp"

namespace ulam::io {

using json = nlohmann::json;

/// {"p": int, "a": [[re, im], ...], "field": "real"|"complex", "dim": int, "norm": "sup"|"euclid"}.
/// Plain numbers are accepted for real coefficients. Errors name the offending field.
RecurrenceSpec parse_spec(const json& j);
RecurrenceSpec load_spec(const std::string& path);
json to_json(const RecurrenceSpec& spec);

json to_json(const RootSet& roots);
json to_json(const ConstantResult& result);
json to_json(const SharpnessReport& report);
json shadow_summary(const ShadowResult& result, const VerificationReport& report);

/// Shortest text that reads back to the same double.
std::string format_double(double value);

/// CSV with header `n,comp_0_re,comp_0_im,...`, one row per index, LF endings.
void write_sequence_csv(std::ostream& out, const Sequence& values);
/// Reads the format written by write_sequence_csv. `expected_dim` of 0 accepts any.
Sequence read_sequence_csv(std::istream& in, std::size_t expected_dim = 0);
Sequence load_sequence_csv(const std::string& path, std::size_t expected_dim = 0);

/// `n,comp_0_re,comp_0_im,...,cert_error,deviation`.
void write_shadow_csv(std::ostream& out, const ShadowResult& result);

} // namespace ulam::io
