#pragma once

#include <string>

#include "casorati/curvature.hpp"
#include "casorati/geometry.hpp"

namespace casorati {

/// Versioned JSON document for a point report; keys come out in a fixed canonical
/// order so parse -> re-serialize is byte identical.
std::string report_to_json(const std::string& name, const Vec& point,
                           const PointGeometry& pg, const CurvatureReport& rep,
                           const ReportOptions& opts);

std::string report_to_text(const std::string& name, const Vec& point,
                           const PointGeometry& pg, const CurvatureReport& rep);

/// One CSV field per value, shortest round-trip formatting.
std::string csv_number(double v);

}  // namespace casorati
