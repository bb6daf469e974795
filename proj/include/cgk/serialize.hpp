#pragma once

// JSON forms of the report types. Rationals are "num/den" strings and big
// integers are decimal strings, so no exact value passes through a double.

#include <json.hpp>

#include "cgk/groupscheme.hpp"
#include "cgk/hypcount.hpp"
#include "cgk/liealg.hpp"
#include "cgk/rational.hpp"
#include "cgk/repbound.hpp"
#include "cgk/spectral.hpp"

namespace cgk {

using Json = nlohmann::json;

Json to_json(const Rational& x);
Json to_json(const BigInt& x);
Json to_json(const BigRational& x);
Json to_json(const RingMatrix& m);
Json to_json(const GroupFamily& f);
Json to_json(const JordanData& jd);
Json to_json(const CentralizerReport& r);
Json to_json(const ScanReport& r);
Json to_json(const GapConstants& c);
Json to_json(const OrbitResult& r);
Json to_json(const RepBound& b);
Json to_json(const MultiplicityBound& m);
Json to_json(const CountResult& r);
Json to_json(const MainTermCheck& m);
Json to_json(const DominationCheck& d);
Json to_json(const DecayProfile& d, bool with_samples = false);
Json to_json(const GapReport& g);

/// {"kind": "SO", "n": 2, "Q": [[...]]}; Q optional ("form" is accepted too).
GroupFamily family_from_json(const Json& j);

/// Dump with two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace cgk
