#pragma once

#include "niltame/normalize.hpp"
#include "niltame/stallings.hpp"
#include "niltame/witness.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>
#include <vector>

namespace niltame::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatName = "niltame-report";
inline constexpr int kFormatVersion = 1;

/// Writes the header line, then one compact JSON object per line.
void write_records(std::ostream& os, const std::vector<Json>& records);
/// Reads records written by write_records. Throws Error on a missing or
/// mismatched header.
std::vector<Json> read_records(std::istream& is);

Json to_json(const PrimeSet& s);
PrimeSet prime_set_from_json(const Json& j);

Json to_json(const Verdict& v, const Alphabet& alphabet);
Verdict verdict_from_json(const Json& j, const Alphabet& alphabet);

Json to_json(const PiecewiseWord& w, const Alphabet& alphabet);
PiecewiseWord piecewise_from_json(const Json& j, const Alphabet& alphabet);

Json to_json(const StallingsGraph& g, const Alphabet& alphabet);
/// Rebuilds from the recorded generators and checks the recorded edges.
StallingsGraph graph_from_json(const Json& j, const Alphabet& alphabet);

Json to_json(const ClosureReport& r, const Alphabet& alphabet);
ClosureReport closure_from_json(const Json& j, const Alphabet& alphabet);

/// One "check" record per corpus check followed by a "verification" record.
std::vector<Json> to_json(const VerificationReport& r);
VerificationReport verification_from_json(const std::vector<Json>& records);

}  // namespace niltame::report
