#include "tmcsig/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tmcsig/keyed_config.hpp"

namespace tmcsig {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvReader::CsvReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

void CsvReader::fail(const std::string& what) const {
  throw std::invalid_argument(source_ + ":" + std::to_string(line_) + ": " + what);
}

void CsvReader::expect_header(const std::vector<std::string>& expected) {
  std::vector<std::string> row;
  if (!next(row, expected.size())) fail("missing header row");
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (row[i] != expected[i]) fail("expected column '" + expected[i] + "', found '" + row[i] + "'");
  }
}

bool CsvReader::next(std::vector<std::string>& row, std::size_t width) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (trim(line).empty()) continue;
    row = split(line, ',');
    if (row.size() != width) {
      fail("expected " + std::to_string(width) + " fields, found " + std::to_string(row.size()));
    }
    return true;
  }
  return false;
}

namespace {

template <typename F>
auto field(CsvReader& reader, F&& parse, const std::string& text) {
  try {
    return parse(text);
  } catch (const std::invalid_argument& e) {
    reader.fail(e.what());
  }
}

long long int_field(CsvReader& r, const std::string& s) { return field(r, parse_int, s); }
double double_field(CsvReader& r, const std::string& s) { return field(r, parse_double, s); }

Movement movement_field(CsvReader& r, const std::string& s) {
  const auto m = parse_movement(s);
  if (!m) r.fail("unknown movement '" + s + "'");
  return *m;
}

TmcTable tmc_fields(CsvReader& r, const std::vector<std::string>& row) {
  TmcTable t;
  for (Movement m : kMovements) {
    const long long v = int_field(r, row[index(m) + 1]);
    if (v < 0) r.fail("negative count");
    t.set(m, v);
  }
  return t;
}

void write_tmc_fields(std::ostream& out, const TmcTable& t) {
  for (Movement m : kMovements) out << ',' << t[m];
  out << '\n';
}

const std::vector<std::string> kGeometryHeader = {"id",       "lanes_1i", "lanes_1o",
                                                  "lanes_2i", "lanes_2o", "lanes_3i",
                                                  "lanes_3o", "lanes_4i", "lanes_4o"};

const std::vector<std::string> kCapacityHeader = {"id",  "C1i", "C1o", "C2i", "C2o",
                                                  "C3i", "C3o", "C4i", "C4o", "TC"};

const std::vector<std::string> kProgramHeader = {"minute", "g1", "y1", "g2", "y2",
                                                 "g3",     "y3", "g4", "y4"};

void write_header(std::ostream& out, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

}  // namespace

std::vector<std::string> tmc_header(const std::string& first_column) {
  std::vector<std::string> h{first_column};
  for (Movement m : kMovements) h.emplace_back(movement_name(m));
  return h;
}

void write_geometries(std::ostream& out, std::span<const IntersectionGeometry> geos) {
  write_header(out, kGeometryHeader);
  for (const auto& g : geos) {
    out << g.id;
    for (Zone z : kZones) out << ',' << g.lanes_in[index(z)] << ',' << g.lanes_out[index(z)];
    out << '\n';
  }
}

std::vector<IntersectionGeometry> read_geometries(std::istream& in, const std::string& source) {
  CsvReader r(in, source);
  r.expect_header(kGeometryHeader);
  std::vector<IntersectionGeometry> out;
  std::vector<std::string> row;
  while (r.next(row, kGeometryHeader.size())) {
    IntersectionGeometry g;
    g.id = row[0];
    if (g.id.empty()) r.fail("empty intersection id");
    for (std::size_t z = 0; z < 4; ++z) {
      g.lanes_in[z] = static_cast<int>(int_field(r, row[1 + 2 * z]));
      g.lanes_out[z] = static_cast<int>(int_field(r, row[2 + 2 * z]));
    }
    try {
      g.validate();
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
    out.push_back(std::move(g));
  }
  return out;
}

void write_minute_tmc(std::ostream& out, std::span<const TmcTable> minutes) {
  write_header(out, tmc_header("minute"));
  for (std::size_t m = 0; m < minutes.size(); ++m) {
    out << m;
    write_tmc_fields(out, minutes[m]);
  }
}

MinuteTmc read_minute_tmc(std::istream& in, const std::string& source) {
  CsvReader r(in, source);
  const auto header = tmc_header("minute");
  r.expect_header(header);
  MinuteTmc out;
  std::vector<std::string> row;
  while (r.next(row, header.size())) {
    if (int_field(r, row[0]) != static_cast<long long>(out.size())) {
      r.fail("minutes must be contiguous from 0");
    }
    out.push_back(tmc_fields(r, row));
  }
  return out;
}

void write_labelled_tmc(std::ostream& out,
                        std::span<const std::pair<std::string, TmcTable>> rows) {
  write_header(out, tmc_header("id"));
  for (const auto& [id, t] : rows) {
    out << id;
    write_tmc_fields(out, t);
  }
}

std::vector<std::pair<std::string, TmcTable>> read_labelled_tmc(std::istream& in,
                                                                const std::string& source) {
  CsvReader r(in, source);
  const auto header = tmc_header("id");
  r.expect_header(header);
  std::vector<std::pair<std::string, TmcTable>> out;
  std::vector<std::string> row;
  while (r.next(row, header.size())) out.emplace_back(row[0], tmc_fields(r, row));
  return out;
}

void write_capacity(std::ostream& out,
                    std::span<const std::pair<std::string, CapacityReport>> rows) {
  write_header(out, kCapacityHeader);
  for (const auto& [id, c] : rows) {
    out << id;
    for (std::size_t z = 0; z < 4; ++z) out << ',' << c.inflow_rate[z] << ',' << c.outflow_rate[z];
    out << ',' << c.total_rate << '\n';
  }
}

std::vector<std::pair<std::string, CapacityReport>> read_capacity(std::istream& in,
                                                                  const std::string& source) {
  CsvReader r(in, source);
  r.expect_header(kCapacityHeader);
  std::vector<std::pair<std::string, CapacityReport>> out;
  std::vector<std::string> row;
  while (r.next(row, kCapacityHeader.size())) {
    CapacityReport c;
    for (std::size_t z = 0; z < 4; ++z) {
      c.inflow_rate[z] = int_field(r, row[1 + 2 * z]);
      c.outflow_rate[z] = int_field(r, row[2 + 2 * z]);
    }
    c.total_rate = int_field(r, row[9]);
    out.emplace_back(row[0], c);
  }
  return out;
}

void write_plans(std::ostream& out, std::span<const VehiclePlan> plans) {
  out << "id,depart,movement\n";
  for (const auto& p : plans) out << p.id << ',' << p.depart << ',' << movement_name(p.movement) << '\n';
}

std::vector<VehiclePlan> read_plans(std::istream& in, const std::string& source) {
  CsvReader r(in, source);
  r.expect_header({"id", "depart", "movement"});
  std::vector<VehiclePlan> out;
  std::vector<std::string> row;
  while (r.next(row, 3)) {
    VehiclePlan p{row[0], int_field(r, row[1]), movement_field(r, row[2])};
    if (p.depart < 0) r.fail("negative departure");
    out.push_back(std::move(p));
  }
  return out;
}

void write_program(std::ostream& out, const SignalProgram& program) {
  write_header(out, kProgramHeader);
  for (std::size_t m = 0; m < program.size(); ++m) {
    out << m;
    for (const auto& p : program.minutes[m].phases) out << ',' << p.green << ',' << p.yellow;
    out << '\n';
  }
}

SignalProgram read_program(std::istream& in, PhaseLayout layout, const std::string& source) {
  CsvReader r(in, source);
  r.expect_header(kProgramHeader);
  SignalProgram program;
  std::vector<std::string> row;
  while (r.next(row, kProgramHeader.size())) {
    if (int_field(r, row[0]) != static_cast<long long>(program.size())) {
      r.fail("minutes must be contiguous from 0");
    }
    PhasePlan plan = make_plan(layout, {0, 0, 0, 0}, 0);
    for (std::size_t k = 0; k < 4; ++k) {
      plan.phases[k].green = static_cast<int>(int_field(r, row[1 + 2 * k]));
      plan.phases[k].yellow = static_cast<int>(int_field(r, row[2 + 2 * k]));
      if (plan.phases[k].green < 0 || plan.phases[k].yellow < 0) r.fail("negative duration");
    }
    if (plan.cycle() <= 0) r.fail("empty cycle");
    program.minutes.push_back(plan);
  }
  return program;
}

std::vector<Trajectory> read_trajectories(std::istream& in, const std::string& source) {
  CsvReader r(in, source);
  r.expect_header({"id", "class", "frame", "x", "y"});
  std::vector<Trajectory> out;
  std::map<std::string, std::size_t> seen;
  long long last_frame = 0;
  std::vector<std::string> row;
  while (r.next(row, 5)) {
    const long long cls = int_field(r, row[1]);
    const long long frame = int_field(r, row[2]);
    const Point p{double_field(r, row[3]), double_field(r, row[4])};
    if (out.empty() || out.back().id != row[0]) {
      if (seen.count(row[0])) r.fail("rows for '" + row[0] + "' are not contiguous");
      if (!out.empty() && out.back().points.size() < 2) {
        r.fail("trajectory '" + out.back().id + "' has fewer than 2 points");
      }
      seen[row[0]] = out.size();
      out.push_back({row[0], static_cast<int>(cls), {}});
    } else {
      if (frame <= last_frame) r.fail("frames of '" + row[0] + "' are not increasing");
      if (cls != out.back().class_label) r.fail("class changes within '" + row[0] + "'");
    }
    last_frame = frame;
    out.back().points.push_back(p);
  }
  if (!out.empty() && out.back().points.size() < 2) {
    r.fail("trajectory '" + out.back().id + "' has fewer than 2 points");
  }
  return out;
}

void write_trajectories(std::ostream& out, std::span<const Trajectory> trajs) {
  out << "id,class,frame,x,y\n";
  for (const auto& t : trajs) {
    for (std::size_t f = 0; f < t.points.size(); ++f) {
      out << t.id << ',' << t.class_label << ',' << f << ',' << format_double(t.points[f].x) << ','
          << format_double(t.points[f].y) << '\n';
    }
  }
}

std::vector<TypicalPath> read_typical_paths(std::istream& in, const std::string& source) {
  CsvReader r(in, source);
  r.expect_header({"movement", "x", "y"});
  std::vector<TypicalPath> out;
  std::vector<std::string> row;
  while (r.next(row, 3)) {
    const Movement m = movement_field(r, row[0]);
    if (out.empty() || out.back().movement != m) {
      for (const auto& p : out) {
        if (p.movement == m) r.fail("points for " + row[0] + " are not contiguous");
      }
      out.push_back({m, {}});
    }
    out.back().points.push_back({double_field(r, row[1]), double_field(r, row[2])});
  }
  return out;
}

void write_typical_paths(std::ostream& out, std::span<const TypicalPath> paths) {
  out << "movement,x,y\n";
  for (const auto& p : paths) {
    for (const auto& pt : p.points) {
      out << movement_name(p.movement) << ',' << format_double(pt.x) << ',' << format_double(pt.y)
          << '\n';
    }
  }
}

void write_sim_summary(std::ostream& out, const SimResult& res) {
  out << "total_wait,nwt,injected,served,residual\n"
      << res.total_wait << ',' << format_double(res.nwt) << ',' << res.injected << ','
      << res.served << ',' << res.residual << '\n';
}

void write_queue_series(std::ostream& out, const SimResult& res) {
  out << "minute,W,N,E,S\n";
  for (std::size_t m = 0; m < res.queue_series.size(); ++m) {
    const auto& q = res.queue_series[m];
    out << m << ',' << q[0] << ',' << q[1] << ',' << q[2] << ',' << q[3] << '\n';
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace tmcsig
