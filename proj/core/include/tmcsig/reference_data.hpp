#pragma once

// The six surveyed intersections: lane counts, camera-derived one-hour TMC and
// the published zone capacity rates. The same numbers ship as CSV under data/.

#include <vector>

#include "tmcsig/core_model.hpp"

namespace tmcsig {

struct ReferenceIntersection {
  IntersectionGeometry geometry;
  TmcTable observed;          // WBR and SBR were not captured and are 0
  CapacityReport published;   // rates as printed in the survey report
};

const std::vector<ReferenceIntersection>& reference_intersections();

std::vector<IntersectionGeometry> reference_geometries();

}  // namespace tmcsig
