#include "tmcsig/sumo.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "tmcsig/keyed_config.hpp"

namespace tmcsig {

namespace pt = boost::property_tree;

namespace {

constexpr const char* kXmlDecl = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

pt::ptree read_xml_doc(const std::string& xml) {
  std::istringstream in(xml);
  pt::ptree tree;
  try {
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw std::invalid_argument(std::string("malformed XML: ") + e.what());
  }
  return tree;
}

std::string attr(const pt::ptree& node, const std::string& name, const std::string& element) {
  const auto v = node.get_optional<std::string>("<xmlattr>." + name);
  if (!v) throw std::invalid_argument(element + " element without '" + name + "'");
  return *v;
}

std::string green_state(const Phase& p) {
  std::string s(kMovementCount, 'r');
  for (Movement m : kMovements) {
    if (p.served.contains(m)) {
      s[index(m)] = 'G';
    } else if (p.permissive.contains(m)) {
      s[index(m)] = 'g';
    }
  }
  return s;
}

std::string yellow_state(const Phase& p) {
  std::string s(kMovementCount, 'r');
  for (Movement m : kMovements) {
    if (p.served.contains(m) || p.permissive.contains(m)) s[index(m)] = 'y';
  }
  return s;
}

}  // namespace

std::string inbound_edge(Zone z) { return std::to_string(zone_label(z)) + "i"; }
std::string outbound_edge(Zone z) { return std::to_string(zone_label(z)) + "o"; }

std::string route_edges(Movement m) {
  return inbound_edge(origin(m)) + " " + outbound_edge(destination(m));
}

Movement movement_from_edges(std::string_view edges) {
  for (Movement m : kMovements) {
    if (route_edges(m) == edges) return m;
  }
  throw std::invalid_argument("no movement uses edges '" + std::string(edges) + "'");
}

std::string emit_routes(std::span<const VehiclePlan> plans) {
  if (!is_sorted_by_depart(plans)) throw std::invalid_argument("routes: plans must be sorted by depart");
  std::ostringstream out;
  out << kXmlDecl << "<routes>\n";
  for (const auto& p : plans) {
    if (p.depart < 0) throw std::invalid_argument("routes: negative departure for " + p.id);
    out << "    <vehicle id=\"" << escape(p.id) << "\" depart=\"" << p.depart << ".00\">\n"
        << "        <route edges=\"" << route_edges(p.movement) << "\"/>\n"
        << "    </vehicle>\n";
  }
  out << "</routes>\n";
  return out.str();
}

std::vector<VehiclePlan> parse_routes(const std::string& xml) {
  const pt::ptree tree = read_xml_doc(xml);
  const auto root = tree.get_child_optional("routes");
  if (!root) throw std::invalid_argument("routes: missing <routes> root");
  std::vector<VehiclePlan> out;
  for (const auto& [tag, node] : *root) {
    if (tag != "vehicle") continue;
    VehiclePlan p;
    p.id = attr(node, "id", "vehicle");
    const double depart = parse_double(attr(node, "depart", "vehicle"));
    if (depart < 0 || depart != std::floor(depart)) {
      throw std::invalid_argument("routes: vehicle " + p.id + " departs at a fractional or negative time");
    }
    p.depart = static_cast<std::int64_t>(depart);
    const auto route = node.get_child_optional("route");
    if (!route) throw std::invalid_argument("routes: vehicle " + p.id + " has no route");
    p.movement = movement_from_edges(attr(*route, "edges", "route"));
    out.push_back(std::move(p));
  }
  return out;
}

int TlsProgram::cycle() const noexcept {
  int c = 0;
  for (const auto& p : phases) c += p.duration;
  return c;
}

TlsProgram tls_program(const PhasePlan& plan, std::string program_id) {
  TlsProgram out{std::move(program_id), {}};
  for (const auto& p : plan.phases) {
    out.phases.push_back({p.green, green_state(p)});
    out.phases.push_back({p.yellow, yellow_state(p)});
  }
  return out;
}

TlsExport emit_tls(const SignalProgram& program) {
  TlsExport out;
  std::vector<const PhasePlan*> distinct;
  for (const auto& plan : program.minutes) {
    if (plan.cycle() <= 0) throw std::invalid_argument("tls: plan with an empty cycle");
    const auto it = std::find_if(distinct.begin(), distinct.end(),
                                 [&](const PhasePlan* d) { return *d == plan; });
    if (it == distinct.end()) {
      out.schedule.push_back(distinct.size());
      out.programs.push_back(tls_program(plan, "p" + std::to_string(distinct.size())));
      distinct.push_back(&plan);
    } else {
      out.schedule.push_back(static_cast<std::size_t>(it - distinct.begin()));
    }
  }
  return out;
}

std::string render_tls(std::span<const TlsProgram> programs, std::string_view tls_id) {
  std::ostringstream out;
  out << kXmlDecl << "<additional>\n";
  for (const auto& prog : programs) {
    out << "    <tlLogic id=\"" << escape(tls_id) << "\" type=\"static\" programID=\""
        << escape(prog.program_id) << "\" offset=\"0\">\n";
    for (const auto& ph : prog.phases) {
      out << "        <phase duration=\"" << ph.duration << "\" state=\"" << ph.state << "\"/>\n";
    }
    out << "    </tlLogic>\n";
  }
  out << "</additional>\n";
  return out.str();
}

std::vector<TlsProgram> parse_tls(const std::string& xml) {
  const pt::ptree tree = read_xml_doc(xml);
  const auto root = tree.get_child_optional("additional");
  if (!root) throw std::invalid_argument("tls: missing <additional> root");
  std::vector<TlsProgram> out;
  for (const auto& [tag, node] : *root) {
    if (tag != "tlLogic") continue;
    if (attr(node, "type", "tlLogic") != "static") throw std::invalid_argument("tls: only static programs are read");
    TlsProgram prog{attr(node, "programID", "tlLogic"), {}};
    for (const auto& [ptag, pnode] : node) {
      if (ptag != "phase") continue;
      TlsPhase ph;
      ph.duration = static_cast<int>(parse_int(attr(pnode, "duration", "phase")));
      ph.state = attr(pnode, "state", "phase");
      if (ph.state.size() != kMovementCount ||
          ph.state.find_first_not_of("Ggyr") != std::string::npos) {
        throw std::invalid_argument("tls: bad state string '" + ph.state + "'");
      }
      prog.phases.push_back(std::move(ph));
    }
    out.push_back(std::move(prog));
  }
  return out;
}

void write_switch_schedule(std::ostream& out, const TlsExport& tls) {
  out << "minute,program_id\n";
  for (std::size_t m = 0; m < tls.schedule.size(); ++m) {
    out << m << ',' << tls.programs.at(tls.schedule[m]).program_id << '\n';
  }
}

}  // namespace tmcsig
