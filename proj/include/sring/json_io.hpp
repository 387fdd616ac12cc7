#pragma once

#include <string>

#include "json.hpp"
#include "sring/catalog.hpp"
#include "sring/ci.hpp"
#include "sring/schur.hpp"

namespace sring {

// Insertion-ordered JSON keeps reports byte-stable across runs.
using Json = nlohmann::ordered_json;

// {"group":"Z2^3xZ3","blocks":[[0],[1,3],...]} with blocks in canonical order
Json sring_to_json(const SchurPartition& p);
SchurPartition sring_from_json(const Json& j);          // throws input_error
SchurPartition sring_from_string(const std::string& s);
SchurPartition sring_from_file(const std::string& path);

Json verdict_to_json(const SchurPartition& p, const CiVerdict& v);
Json validity_to_json(const SchurPartition& p, const ValidityReport& r);

// p1/q1, generalized-wreath and star certificates, trichotomy table
Json decompose_to_json(const SchurPartition& p, int q);

Json theorem_report_to_json(const TheoremReport& r);

struct ClassifyOptions {
  bool with_catalog = true;
  bool with_schurian = true;
  EnumerationLimits enum_limits;
  CiLimits ci_limits;
};
Json classify_to_json(const GroupSpec& h, const ClassifyOptions& opts = {});

Json non_ci_report_to_json(const NonCiSearchReport& r);

std::string dump_deterministic(const Json& j);  // 2-space indent, '\n' terminated

}  // namespace sring
