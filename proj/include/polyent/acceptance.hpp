#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "polyent/estimation.hpp"

namespace polyent {

enum class Verdict { pass, fail, skip };

const char* to_string(Verdict v);

struct CriterionResult {
  std::string id;
  std::string title;
  Verdict verdict = Verdict::skip;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  // Comma-separated criterion ids ("5", "3a,3b"); empty runs everything.
  std::string filter;
  // Tolerance for the slope comparisons that are stated with 0.15.
  double tolerance = 0.15;
  // When set, counts CSVs are written here, one per criterion.
  std::filesystem::path out_dir;
};

std::vector<std::string> criterion_ids();

// Pinned protocols, by role.
EstimationProtocol zero_entropy_protocol();  // library defaults
EstimationProtocol wandering_protocol();
EstimationProtocol invariance_protocol();
EstimationProtocol product_protocol();
EstimationProtocol symmetric_protocol();
EstimationProtocol trend_protocol();

// Runs the selected criteria in order; each result also carries its CSV text
// when out_dir is set. Never throws on a failing criterion.
std::vector<CriterionResult> acceptance_suite(const AcceptanceOptions& options);

std::string format_result_line(const CriterionResult& r);

}  // namespace polyent
