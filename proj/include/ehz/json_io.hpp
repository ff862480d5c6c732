#pragma once

#include <string>

#include "ehz/billiards.hpp"
#include "ehz/capacity.hpp"
#include "ehz/corpus.hpp"
#include "ehz/curves.hpp"

// Text serialization. Doubles are written in the shortest form that parses
// back to the same bits, so emit/parse round trips are exact. Parse errors
// throw Error(kParse) naming the offending field; geometric validation errors
// keep their own codes.
namespace ehz::io {

std::string body_to_json(const BodySpec& body);
/// Either representation may be missing; with both present they are taken
/// verbatim after a consistency check.
BodySpec body_from_json(const std::string& text);

std::string curve_to_json(const PointSeq& points);
PointSeq curve_from_json(const std::string& text);

std::string certificate_to_json(const FcpCertificate& cert);
std::string strong_report_to_json(const StrongReport& report);
std::string weak_report_to_json(const WeakReport& report);
std::string identities_to_json(const IdentityReport& report);

std::string result_to_json(const CapacityResult& result);
CapacityResult result_from_json(const std::string& text);

}  // namespace ehz::io
