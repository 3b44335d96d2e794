#pragma once

// CSV file formats. Every file starts with a header row; fields are plain
// comma-separated values without quoting.
//
//   geometry      id,lanes_1i,lanes_1o,lanes_2i,lanes_2o,lanes_3i,lanes_3o,lanes_4i,lanes_4o
//   tmc           minute,WBL,WBT,WBR,NBL,NBT,NBR,EBL,EBT,EBR,SBL,SBT,SBR
//   labelled tmc  id,WBL,...,SBR
//   capacity      id,C1i,C1o,C2i,C2o,C3i,C3o,C4i,C4o,TC
//   plans         id,depart,movement
//   program       minute,g1,y1,g2,y2,g3,y3,g4,y4
//   trajectories  id,class,frame,x,y         (sorted by id, frame)
//   typical paths movement,x,y               (points in order per movement)
//   sim summary   total_wait,nwt,injected,served,residual
//   queue series  minute,W,N,E,S

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tmcsig/core_model.hpp"
#include "tmcsig/signals.hpp"
#include "tmcsig/sim.hpp"
#include "tmcsig/trafficgen.hpp"
#include "tmcsig/trajectory.hpp"

namespace tmcsig {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Header-checked row reader. Errors carry the source name and line number.
class CsvReader {
 public:
  CsvReader(std::istream& in, std::string source);

  /// Reads the header and throws unless it equals `expected`.
  void expect_header(const std::vector<std::string>& expected);
  /// Next non-empty row, checked to have `width` fields; false at end of input.
  bool next(std::vector<std::string>& row, std::size_t width);

  [[noreturn]] void fail(const std::string& what) const;

 private:
  std::istream& in_;
  std::string source_;
  int line_ = 0;
};

std::vector<std::string> tmc_header(const std::string& first_column);

void write_geometries(std::ostream& out, std::span<const IntersectionGeometry> geos);
std::vector<IntersectionGeometry> read_geometries(std::istream& in, const std::string& source = "geometry");

void write_minute_tmc(std::ostream& out, std::span<const TmcTable> minutes);
MinuteTmc read_minute_tmc(std::istream& in, const std::string& source = "tmc");

void write_labelled_tmc(std::ostream& out,
                        std::span<const std::pair<std::string, TmcTable>> rows);
std::vector<std::pair<std::string, TmcTable>> read_labelled_tmc(std::istream& in,
                                                                const std::string& source = "tmc");

void write_capacity(std::ostream& out,
                    std::span<const std::pair<std::string, CapacityReport>> rows);
std::vector<std::pair<std::string, CapacityReport>> read_capacity(std::istream& in,
                                                                  const std::string& source = "capacity");

void write_plans(std::ostream& out, std::span<const VehiclePlan> plans);
std::vector<VehiclePlan> read_plans(std::istream& in, const std::string& source = "plans");

void write_program(std::ostream& out, const SignalProgram& program);
/// Phase membership is not stored in the file; `layout` supplies it.
SignalProgram read_program(std::istream& in, PhaseLayout layout,
                           const std::string& source = "program");

std::vector<Trajectory> read_trajectories(std::istream& in, const std::string& source = "trajectories");
void write_trajectories(std::ostream& out, std::span<const Trajectory> trajs);

std::vector<TypicalPath> read_typical_paths(std::istream& in, const std::string& source = "paths");
void write_typical_paths(std::ostream& out, std::span<const TypicalPath> paths);

void write_sim_summary(std::ostream& out, const SimResult& res);
void write_queue_series(std::ostream& out, const SimResult& res);

/// Whole-file helpers; throw std::runtime_error when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace tmcsig
