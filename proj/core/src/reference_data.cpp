#include "tmcsig/reference_data.hpp"

namespace tmcsig {

namespace {

// Camera columns: WBL WBT | NBL NBT NBR | EBL EBT EBR | SBL SBT.
TmcTable camera_counts(std::int64_t wbl, std::int64_t wbt, std::int64_t nbl, std::int64_t nbt,
                       std::int64_t nbr, std::int64_t ebl, std::int64_t ebt, std::int64_t ebr,
                       std::int64_t sbl, std::int64_t sbt) {
  return TmcTable({wbl, wbt, 0, nbl, nbt, nbr, ebl, ebt, ebr, sbl, sbt, 0});
}

ReferenceIntersection make(const char* id, std::array<int, 8> lanes, TmcTable tmc,
                           std::array<std::int64_t, 9> rates) {
  ReferenceIntersection r;
  r.geometry.id = id;
  for (std::size_t z = 0; z < 4; ++z) {
    r.geometry.lanes_in[z] = lanes[2 * z];
    r.geometry.lanes_out[z] = lanes[2 * z + 1];
    r.published.inflow_rate[z] = rates[2 * z];
    r.published.outflow_rate[z] = rates[2 * z + 1];
  }
  r.published.total_rate = rates[8];
  r.observed = tmc;
  return r;
}

}  // namespace

const std::vector<ReferenceIntersection>& reference_intersections() {
  static const std::vector<ReferenceIntersection> table = {
      make("INT1", {6, 4, 5, 3, 6, 4, 6, 3},
           camera_counts(505, 0, 233, 757, 214, 0, 1345, 10, 99, 645),
           {84, 414, 241, 387, 226, 58, 124, 252, 103}),
      make("INT2", {5, 4, 3, 2, 5, 4, 3, 2},
           camera_counts(49, 249, 36, 25, 39, 8, 744, 0, 40, 46),
           {60, 206, 33, 47, 150, 71, 29, 16, 44}),
      // SBL is 318: the printed 3186 disagrees with the row total (6818) and
      // with the capacity rates C1o, C4i and TC.
      make("INT3", {6, 4, 5, 3, 6, 4, 5, 3},
           camera_counts(441, 1477, 94, 1082, 0, 157, 929, 0, 318, 2320),
           {320, 312, 235, 920, 181, 393, 528, 413, 189}),
      make("INT4", {5, 2, 4, 2, 4, 2, 4, 2},
           camera_counts(133, 232, 63, 277, 219, 44, 575, 0, 212, 352),
           {73, 503, 140, 242, 155, 147, 141, 160, 84}),
      make("INT5", {5, 3, 4, 3, 5, 3, 5, 2},
           camera_counts(0, 1940, 2412, 1249, 155, 754, 5049, 73, 635, 2209),
           {388, 1946, 954, 761, 1175, 1451, 569, 1001, 483}),
      make("INT6", {6, 5, 5, 3, 6, 3, 5, 2},
           camera_counts(452, 2232, 3153, 266, 0, 497, 2141, 558, 632, 358),
           {447, 555, 684, 456, 533, 1795, 198, 381, 294}),
  };
  return table;
}

std::vector<IntersectionGeometry> reference_geometries() {
  std::vector<IntersectionGeometry> out;
  for (const auto& r : reference_intersections()) out.push_back(r.geometry);
  return out;
}

}  // namespace tmcsig
