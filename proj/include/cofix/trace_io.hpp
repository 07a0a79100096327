#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cofix/iteration.hpp"
#include "cofix/probes.hpp"

namespace cofix {

/// CSV with the fixed columns n,d2_step,bound,monotone_ok, one row per step.
std::string trace_to_csv(const std::vector<TraceStep>& steps);

/// The same records as a JSON array with identical keys.
nlohmann::json trace_to_json(const std::vector<TraceStep>& steps);

/// Writes body to path, throwing DiagnosticError on any I/O failure.
void write_text_file(const std::string& path, const std::string& body);

std::string read_text_file(const std::string& path);

/// JSON form of a contraction report; points are rendered by the caller.
template <class Point, class PointWriter>
nlohmann::json contraction_report_to_json(const ContractionReport<Point>& report,
                                          PointWriter&& point) {
  return {
      {"condition", to_string(report.condition)},
      {"k_hat", report.k_hat},
      {"witness",
       {{"upper", {{"first", point(report.witness.upper.first)},
                   {"second", point(report.witness.upper.second)}}},
        {"lower", {{"first", point(report.witness.lower.first)},
                   {"second", point(report.witness.lower.second)}}}}},
      {"samples_used", report.samples_used},
      {"samples_skipped", report.samples_skipped},
      {"ratio_min", report.ratio_min},
      {"ratio_max", report.ratio_max},
      {"seed", report.seed},
  };
}

template <class Point>
nlohmann::json uniqueness_report_to_json(const UniquenessReport<Point>& report) {
  auto check = [](const HypothesisCheck& c) {
    return nlohmann::json{
        {"name", c.name},
        {"status", c.status == HypothesisStatus::Satisfied ? "satisfied" : "not_verifiable"},
        {"detail", c.detail}};
  };
  nlohmann::json j{
      {"unique_in_product", check(report.unique_in_product)},
      {"bound_in_x", check(report.bound_in_x)},
      {"initial_comparable", check(report.initial_comparable)},
      {"components_checked", report.components_checked},
  };
  if (report.components_checked) {
    j["components_equal"] = report.components_equal;
    j["component_distance"] = report.component_distance;
    if (report.components_equal) j["fixed_point_residual"] = report.fixed_point_residual;
  }
  return j;
}

}  // namespace cofix
