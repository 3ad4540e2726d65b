// Copyright 2026 The teleportsim developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tsim/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace tsim {

namespace {

constexpr double kOrderingTolerance = 1e-9;

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> words;
  std::istringstream in(s);
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("bad number '" + s + "' for " + what);
  }
  if (used != s.size()) throw ValidationError("bad number '" + s + "' for " + what);
  return v;
}

std::uint64_t parse_uint(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("bad integer '" + s + "' for " + what);
  }
  if (used != s.size()) throw ValidationError("bad integer '" + s + "' for " + what);
  return v;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct TopologyInfo {
  std::vector<std::string> nodes;
  std::vector<std::string> links;  // "leaf-hub" labels, wire order
};

const TopologyInfo& topology_for(ProtocolKind kind) {
  static const TopologyInfo two{{"sender", "receiver"}, {"sender-receiver"}};
  static const TopologyInfo three{{"input0", "input1", "gate"}, {"input0-gate", "input1-gate"}};
  static const TopologyInfo four{{"input0", "input1", "input2", "gate"},
                                 {"input0-gate", "input1-gate", "input2-gate"}};
  switch (kind) {
    case ProtocolKind::ThreeNodeGate: return three;
    case ProtocolKind::Toffoli: return four;
    default: return two;
  }
}

struct NoiseSettings {
  std::map<std::string, double> link_fidelity;
  std::map<std::string, DeviceNoise> device;
};

NoiseSettings default_noise(ProtocolKind kind) {
  const TopologyInfo& topo = topology_for(kind);
  NoiseSettings ns;
  for (const std::string& l : topo.links) ns.link_fidelity[l] = 1.0;
  for (const std::string& n : topo.nodes) ns.device[n] = DeviceNoise{};
  return ns;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void apply_noise_path(NoiseSettings& ns, ProtocolKind kind, const std::string& path, double value) {
  const TopologyInfo& topo = topology_for(kind);
  const std::vector<std::string> parts = split_on(path, '.');

  auto check_link_range = [&](double f) {
    if (f < 0.25 || f > 1.0) {
      throw ValidationError("link fidelity " + fmt_double(f) + " outside [0.25, 1] (path '" + path + "')");
    }
  };
  auto check_prob_range = [&](double p) {
    if (p < 0.0 || p > 1.0) {
      throw ValidationError("noise probability " + fmt_double(p) + " outside [0, 1] (path '" + path + "')");
    }
  };

  if (parts.size() >= 2 && parts[0] == "link") {
    check_link_range(value);
    if (parts.size() == 2 && parts[1] == "fidelity") {
      for (auto& [label, f] : ns.link_fidelity) f = value;
      return;
    }
    if (parts.size() == 3 && parts[2] == "fidelity") {
      const auto it = ns.link_fidelity.find(parts[1]);
      if (it == ns.link_fidelity.end()) {
        throw ValidationError("unknown link '" + parts[1] + "'; this topology has: " +
                              join(topo.links, ", "));
      }
      it->second = value;
      return;
    }
    throw ValidationError("bad link path '" + path + "'; use link.fidelity or link.<name>.fidelity");
  }

  if (parts.size() >= 2 && parts[0] == "device") {
    check_prob_range(value);
    auto set_field = [&](DeviceNoise& d, const std::string& field) {
      if (field == "depol") {
        d.single_qubit_depol = value;
        d.two_qubit_depol = value;
      } else if (field == "single_qubit_depol") {
        d.single_qubit_depol = value;
      } else if (field == "two_qubit_depol") {
        d.two_qubit_depol = value;
      } else if (field == "measurement_flip") {
        d.measurement_flip = value;
      } else {
        throw ValidationError("unknown device field '" + field + "' in path '" + path +
                              "'; fields: depol, single_qubit_depol, two_qubit_depol, measurement_flip");
      }
    };
    if (parts.size() == 2) {
      for (auto& [name, d] : ns.device) set_field(d, parts[1]);
      return;
    }
    if (parts.size() == 3) {
      const auto it = ns.device.find(parts[1]);
      if (it == ns.device.end()) {
        throw ValidationError("unknown node '" + parts[1] + "'; this topology has: " +
                              join(topo.nodes, ", "));
      }
      set_field(it->second, parts[2]);
      return;
    }
    throw ValidationError("bad device path '" + path + "'");
  }

  throw ValidationError("unknown parameter path '" + path + "'; paths start with link. or device.");
}

std::vector<double> parse_sweep_values(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split_on(text, ':');
    if (parts.size() != 3) throw ValidationError("sweep range must be start:stop:step, got '" + text + "'");
    const double start = parse_double(trim(parts[0]), "sweep start");
    const double stop = parse_double(trim(parts[1]), "sweep stop");
    const double step = parse_double(trim(parts[2]), "sweep step");
    if (step == 0.0) throw ValidationError("sweep step must be nonzero");
    const double span = (stop - start) / step;
    if (span < -1e-9) throw ValidationError("sweep range '" + text + "' never reaches its stop value");
    const long count = static_cast<long>(std::floor(span + 1e-9)) + 1;
    if (count > 10000) throw ValidationError("sweep range '" + text + "' has too many points");
    for (long i = 0; i < count; ++i) values.push_back(start + static_cast<double>(i) * step);
    return values;
  }
  for (const std::string& part : split_on(text, ',')) {
    const std::string v = trim(part);
    if (v.empty()) throw ValidationError("empty value in sweep list '" + text + "'");
    values.push_back(parse_double(v, "sweep value"));
  }
  if (values.empty()) throw ValidationError("sweep needs at least one value");
  return values;
}

ProtocolKind parse_protocol(const std::string& name) {
  const std::string n = lower(name);
  if (n == "state") return ProtocolKind::StateTeleport;
  if (n == "single") return ProtocolKind::SingleGate;
  if (n == "two_node") return ProtocolKind::TwoNodeGate;
  if (n == "three_node") return ProtocolKind::ThreeNodeGate;
  if (n == "toffoli") return ProtocolKind::Toffoli;
  throw ValidationError("unknown protocol '" + name +
                        "'; protocols: state, single, two_node, three_node, toffoli");
}

InputSpec build_input(const ExperimentSpec& spec) {
  const int wires = wire_count(spec.protocol);
  InputSpec input;
  input.preps.resize(wires);
  for (int w = 0; w < wires; ++w) {
    const auto it = spec.input_preps.find(w);
    if (it == spec.input_preps.end()) {
      input.preps[w] = {gate_by_name("H")};
      continue;
    }
    for (const std::string& name : it->second) input.preps[w].push_back(gate_by_name(name));
  }
  return input;
}

TeleportResult execute_point(const ExperimentSpec& spec, const NoiseSettings& ns,
                             RunOptions::Mode mode, std::uint64_t seed) {
  auto link = [&](const char* label) { return LinkNoise{ns.link_fidelity.at(label)}; };
  auto dev = [&](const char* name) { return ns.device.at(name); };

  NetworkConfig cfg;
  switch (spec.protocol) {
    case ProtocolKind::StateTeleport:
    case ProtocolKind::SingleGate:
    case ProtocolKind::TwoNodeGate:
      cfg = two_node_network(link("sender-receiver"), dev("sender"), dev("receiver"));
      break;
    case ProtocolKind::ThreeNodeGate:
      cfg = three_node_network(link("input0-gate"), link("input1-gate"), dev("input0"),
                               dev("input1"), dev("gate"));
      break;
    case ProtocolKind::Toffoli:
      cfg = four_node_network({link("input0-gate"), link("input1-gate"), link("input2-gate")},
                              {dev("input0"), dev("input1"), dev("input2")}, dev("gate"));
      break;
  }

  Simulation sim(cfg);
  const InputSpec input = build_input(spec);
  ProtocolOptions options;
  options.run.mode = mode;
  options.run.seed = seed;

  switch (spec.protocol) {
    case ProtocolKind::StateTeleport:
      return state_teleport(sim, input, options);
    case ProtocolKind::SingleGate:
      return single_gate_teleport(sim, gate_by_name(spec.gate), input, options);
    case ProtocolKind::TwoNodeGate:
      return two_node_gate_teleport(sim, gate_by_name(spec.gate), input, options);
    case ProtocolKind::ThreeNodeGate:
      return three_node_gate_teleport(sim, gate_by_name(spec.gate), input, options);
    case ProtocolKind::Toffoli:
      return toffoli_teleport(sim, input, options);
  }
  throw ValidationError("unreachable protocol kind");
}

std::string describe_point(const std::vector<std::pair<std::string, double>>& params) {
  if (params.empty()) return "the default point";
  std::string out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i].first + "=" + fmt_double(params[i].second);
  }
  return out;
}

struct CurvePoint {
  double x = 0, mean = 0, sd = 0;
};

struct Curve {
  std::string label;
  std::vector<CurvePoint> points;
};

void write_svg_curves(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::vector<Curve>& curves) {
  if (curves.empty()) throw ValidationError("plot has no curves");
  for (const Curve& c : curves) {
    if (c.points.empty()) throw ValidationError("plot curve '" + c.label + "' has no points");
  }

  constexpr double kw = 720, kh = 480;
  constexpr double left = 72, right = 692, top = 48, bottom = 420;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  constexpr int kNColors = 6;

  double x_lo = curves[0].points[0].x, x_hi = x_lo;
  double y_lo = 1e300, y_hi = -1e300;
  for (const Curve& c : curves) {
    for (const CurvePoint& p : c.points) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      y_lo = std::min(y_lo, p.mean - p.sd);
      y_hi = std::max(y_hi, p.mean + p.sd);
    }
  }
  if (x_hi - x_lo < 1e-12) {
    const double pad = std::max(0.5, std::abs(x_lo) * 0.1);
    x_lo -= pad;
    x_hi += pad;
  }
  {
    const double pad = std::max(0.02, (y_hi - y_lo) * 0.08);
    y_lo -= pad;
    y_hi += pad;
  }

  auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * (right - left); };
  auto py = [&](double y) { return bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top); };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  auto tick_label = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return std::string(buf);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
         "viewBox=\"0 0 720 480\">\n";
  svg += "<rect width=\"" + num(kw) + "\" height=\"" + num(kh) + "\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"" + num((left + right) / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\" fill=\"#222\">" + title + "</text>\n";

  for (int i = 0; i <= 5; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / 5.0;
    const double yv = y_lo + (y_hi - y_lo) * i / 5.0;
    svg += "<line x1=\"" + num(px(xv)) + "\" y1=\"" + num(top) + "\" x2=\"" + num(px(xv)) +
           "\" y2=\"" + num(bottom) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(py(yv)) + "\" x2=\"" + num(right) +
           "\" y2=\"" + num(py(yv)) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(bottom + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">" +
           tick_label(xv) + "</text>\n";
    svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(py(yv) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">" +
           tick_label(yv) + "</text>\n";
  }
  svg += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(right - left) +
         "\" height=\"" + num(bottom - top) + "\" fill=\"none\" stroke=\"#333333\"/>\n";
  svg += "<text x=\"" + num((left + right) / 2) + "\" y=\"" + num(kh - 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\">" +
         x_label + "</text>\n";
  svg += "<text x=\"18\" y=\"" + num((top + bottom) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\" "
         "transform=\"rotate(-90 18 " + num((top + bottom) / 2) + ")\">fidelity</text>\n";

  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const Curve& c = curves[ci];
    const char* color = kColors[ci % kNColors];

    bool has_band = false;
    for (const CurvePoint& p : c.points) has_band |= p.sd > 1e-15;
    if (has_band && c.points.size() > 1) {
      std::string pts;
      for (const CurvePoint& p : c.points) pts += num(px(p.x)) + "," + num(py(p.mean + p.sd)) + " ";
      for (auto it = c.points.rbegin(); it != c.points.rend(); ++it) {
        pts += num(px(it->x)) + "," + num(py(it->mean - it->sd)) + " ";
      }
      svg += "<polygon points=\"" + pts + "\" fill=\"" + color + "\" fill-opacity=\"0.15\" "
             "stroke=\"none\"/>\n";
    }
    if (c.points.size() > 1) {
      std::string pts;
      for (const CurvePoint& p : c.points) pts += num(px(p.x)) + "," + num(py(p.mean)) + " ";
      svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"1.8\"/>\n";
    }
    for (const CurvePoint& p : c.points) {
      svg += "<circle cx=\"" + num(px(p.x)) + "\" cy=\"" + num(py(p.mean)) +
             "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
  }

  const bool legend = curves.size() > 1 || !curves[0].label.empty();
  if (legend) {
    const double lx = right - 170, ly = top + 10;
    svg += "<rect x=\"" + num(lx - 8) + "\" y=\"" + num(ly - 14) + "\" width=\"178\" height=\"" +
           num(curves.size() * 18 + 10.0) + "\" fill=\"#ffffff\" fill-opacity=\"0.85\" "
           "stroke=\"#999999\"/>\n";
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
      const double y = ly + static_cast<double>(ci) * 18;
      svg += "<line x1=\"" + num(lx) + "\" y1=\"" + num(y) + "\" x2=\"" + num(lx + 22) +
             "\" y2=\"" + num(y) + "\" stroke=\"" + std::string(kColors[ci % kNColors]) +
             "\" stroke-width=\"2.5\"/>\n";
      svg += "<text x=\"" + num(lx + 28) + "\" y=\"" + num(y + 4) +
             "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\">" + curves[ci].label +
             "</text>\n";
    }
  }
  svg += "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << svg;
  if (!out) throw ValidationError("cannot write '" + path + "'");
}

// Groups records of one swept parameter into (x, mean, sd) points,
// preserving sweep order.
std::vector<CurvePoint> aggregate_records(const std::vector<SweepRecord>& records,
                                          std::size_t param_index) {
  std::vector<double> xs;
  std::vector<std::vector<double>> groups;
  for (const SweepRecord& r : records) {
    const double x = r.params[param_index].second;
    std::size_t g = xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] == x) {
        g = i;
        break;
      }
    }
    if (g == xs.size()) {
      xs.push_back(x);
      groups.emplace_back();
    }
    groups[g].push_back(r.fidelity);
  }

  std::vector<CurvePoint> points;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::vector<double>& v = groups[i];
    double mean = 0;
    for (double f : v) mean += f;
    mean /= static_cast<double>(v.size());
    double sd = 0;
    if (v.size() > 1) {
      double acc = 0;
      for (double f : v) acc += (f - mean) * (f - mean);
      sd = std::sqrt(acc / static_cast<double>(v.size() - 1));
    }
    points.push_back({xs[i], mean, sd});
  }
  return points;
}

ExperimentSpec figure_spec(ProtocolKind kind, const std::string& gate, RunOptions::Mode mode) {
  ExperimentSpec spec;
  spec.protocol = kind;
  spec.protocol_set = true;
  spec.gate = gate;
  spec.mode = mode;
  spec.runs = 100;
  return spec;
}

SweepParam sweep_of(const std::string& path, std::vector<double> values) {
  return SweepParam{path, std::move(values)};
}

std::vector<double> ascending_link_grid() {
  std::vector<double> g = default_link_grid();
  std::reverse(g.begin(), g.end());
  return g;
}

}  // namespace

int wire_count(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::StateTeleport:
    case ProtocolKind::SingleGate:
      return 1;
    case ProtocolKind::TwoNodeGate:
    case ProtocolKind::ThreeNodeGate:
      return 2;
    case ProtocolKind::Toffoli:
      return 3;
  }
  return 0;
}

std::string protocol_name(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::StateTeleport: return "state";
    case ProtocolKind::SingleGate: return "single";
    case ProtocolKind::TwoNodeGate: return "two_node";
    case ProtocolKind::ThreeNodeGate: return "three_node";
    case ProtocolKind::Toffoli: return "toffoli";
  }
  return "?";
}

void apply_spec_line(ExperimentSpec& spec, const std::string& raw) {
  std::string line = raw;
  if (const std::size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
  line = trim(line);
  if (line.empty()) return;

  const bool is_sweep = line.rfind("sweep ", 0) == 0 || line == "sweep";
  if (is_sweep) line = trim(line.substr(5));

  const std::size_t eq = line.find('=');
  if (eq == std::string::npos) throw ValidationError("expected 'key = value' in '" + trim(raw) + "'");
  const std::string key = trim(line.substr(0, eq));
  const std::string value = trim(line.substr(eq + 1));
  if (key.empty()) throw ValidationError("missing key in '" + trim(raw) + "'");

  if (is_sweep) {
    spec.sweeps.push_back(sweep_of(key, parse_sweep_values(value)));
    return;
  }

  if (key == "protocol") {
    spec.protocol = parse_protocol(value);
    spec.protocol_set = true;
  } else if (key == "gate") {
    spec.gate = value;
  } else if (key == "mode") {
    const std::string m = lower(value);
    if (m == "exact") {
      spec.mode = RunOptions::Mode::Exact;
    } else if (m == "sampled") {
      spec.mode = RunOptions::Mode::Sampled;
    } else {
      throw ValidationError("unknown mode '" + value + "'; modes: exact, sampled");
    }
  } else if (key == "runs") {
    const std::uint64_t r = parse_uint(value, "runs");
    if (r < 1) throw ValidationError("runs must be at least 1");
    if (r > 10000000) throw ValidationError("runs value " + value + " is too large");
    spec.runs = static_cast<int>(r);
  } else if (key == "seed") {
    spec.base_seed = parse_uint(value, "seed");
  } else if (key.rfind("input.", 0) == 0) {
    const std::string idx = key.substr(6);
    if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos) {
      throw ValidationError("bad input key '" + key + "'; use input.<wire>");
    }
    spec.input_preps[static_cast<int>(parse_uint(idx, "input wire"))] = split_words(value);
  } else if (key.rfind("link.", 0) == 0 || key.rfind("device.", 0) == 0) {
    spec.base_params.emplace_back(key, parse_double(value, "'" + key + "'"));
  } else {
    throw ValidationError("unknown key '" + key + "'");
  }
}

void finalize_spec(const ExperimentSpec& spec) {
  if (!spec.protocol_set) throw ValidationError("spec does not set 'protocol'");
  const int wires = wire_count(spec.protocol);

  switch (spec.protocol) {
    case ProtocolKind::StateTeleport:
      if (!spec.gate.empty()) throw ValidationError("protocol 'state' takes no gate");
      break;
    case ProtocolKind::SingleGate:
    case ProtocolKind::TwoNodeGate:
    case ProtocolKind::ThreeNodeGate: {
      if (spec.gate.empty()) {
        throw ValidationError("protocol '" + protocol_name(spec.protocol) + "' needs a gate");
      }
      const GateMatrix g = gate_by_name(spec.gate);
      const int want = spec.protocol == ProtocolKind::SingleGate ? 1 : 2;
      if (g.n_qubits != want) {
        throw ValidationError("protocol '" + protocol_name(spec.protocol) + "' needs a " +
                              std::to_string(want) + "-qubit gate, '" + spec.gate + "' acts on " +
                              std::to_string(g.n_qubits));
      }
      break;
    }
    case ProtocolKind::Toffoli:
      if (!spec.gate.empty() && lower(spec.gate) != "toff") {
        throw ValidationError("protocol 'toffoli' teleports TOFF; leave 'gate' unset");
      }
      break;
  }

  for (const auto& [wire, names] : spec.input_preps) {
    if (wire < 0 || wire >= wires) {
      throw ValidationError("input wire " + std::to_string(wire) + " out of range; protocol '" +
                            protocol_name(spec.protocol) + "' has " + std::to_string(wires));
    }
    for (const std::string& name : names) {
      const GateMatrix g = gate_by_name(name);
      if (g.n_qubits != 1) {
        throw ValidationError("input preparation gate '" + name + "' is not single-qubit");
      }
    }
  }

  NoiseSettings scratch = default_noise(spec.protocol);
  for (const auto& [path, value] : spec.base_params) {
    apply_noise_path(scratch, spec.protocol, path, value);
  }
  std::set<std::string> swept;
  for (const SweepParam& s : spec.sweeps) {
    if (!swept.insert(s.path).second) throw ValidationError("parameter '" + s.path + "' swept twice");
    if (s.values.empty()) throw ValidationError("sweep of '" + s.path + "' has no values");
    for (double v : s.values) apply_noise_path(scratch, spec.protocol, s.path, v);
  }
  if (spec.runs < 1) throw ValidationError("runs must be at least 1");
}

ExperimentSpec parse_spec(const std::string& text) {
  ExperimentSpec spec;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    try {
      apply_spec_line(spec, line);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  finalize_spec(spec);
  return spec;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

std::vector<SweepRecord> run_sweep(const ExperimentSpec& spec) {
  finalize_spec(spec);

  std::vector<std::vector<std::pair<std::string, double>>> points;
  std::vector<std::size_t> odometer(spec.sweeps.size(), 0);
  for (;;) {
    std::vector<std::pair<std::string, double>> point;
    for (std::size_t i = 0; i < spec.sweeps.size(); ++i) {
      point.emplace_back(spec.sweeps[i].path, spec.sweeps[i].values[odometer[i]]);
    }
    points.push_back(std::move(point));
    std::size_t i = spec.sweeps.size();
    while (i-- > 0) {
      if (++odometer[i] < spec.sweeps[i].values.size()) break;
      odometer[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }

  std::vector<SweepRecord> records;
  for (const auto& point : points) {
    NoiseSettings ns = default_noise(spec.protocol);
    for (const auto& [path, value] : spec.base_params) apply_noise_path(ns, spec.protocol, path, value);
    for (const auto& [path, value] : point) apply_noise_path(ns, spec.protocol, path, value);

    const int runs = spec.mode == RunOptions::Mode::Exact ? 1 : spec.runs;
    for (int r = 0; r < runs; ++r) {
      const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(r);
      try {
        const TeleportResult result = execute_point(spec, ns, spec.mode, seed);
        records.push_back({point, r, seed, result.fidelity, result.branch_count()});
      } catch (const SimulationError& e) {
        throw SimulationError("at " + describe_point(point) + ": " + e.what());
      }
    }
  }
  return records;
}

void emit_csv(const std::vector<SweepRecord>& records, const std::string& path) {
  if (records.empty()) throw ValidationError("no records to write");

  std::vector<std::string> columns;
  for (const auto& [p, v] : records.front().params) columns.push_back(p);
  std::sort(columns.begin(), columns.end());

  std::string out;
  for (const std::string& c : columns) out += c + ",";
  out += "run,seed,fidelity\n";

  for (const SweepRecord& r : records) {
    if (r.params.size() != columns.size()) {
      throw ValidationError("records disagree about the swept parameters");
    }
    for (const std::string& c : columns) {
      bool found = false;
      for (const auto& [p, v] : r.params) {
        if (p == c) {
          out += fmt_double(v);
          found = true;
          break;
        }
      }
      if (!found) throw ValidationError("record missing value for '" + c + "'");
      out += ",";
    }
    out += std::to_string(r.run) + "," + std::to_string(r.seed) + "," + fmt_double(r.fidelity) + "\n";
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot write '" + path + "'");
  file << out;
  if (!file) throw ValidationError("cannot write '" + path + "'");
}

void emit_plot(const std::vector<SweepRecord>& records, const std::string& path) {
  if (records.empty()) throw ValidationError("no records to plot");
  std::set<std::string> paths;
  for (const SweepRecord& r : records) {
    for (const auto& [p, v] : r.params) paths.insert(p);
  }
  if (paths.size() != 1) {
    throw ValidationError("plot needs exactly one swept parameter, records have " +
                          std::to_string(paths.size()) + "; sweep one parameter per plot");
  }
  const std::string x = *paths.begin();
  Curve curve{"", aggregate_records(records, 0)};
  write_svg_curves(path, "fidelity vs " + x, x, {curve});
}

std::vector<double> default_link_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 10; ++i) g.push_back(1.0 - 0.05 * i);
  return g;
}

std::vector<double> default_depol_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 10; ++i) g.push_back(0.02 * i);
  return g;
}

std::vector<std::string> figure_ids() {
  return {"two-node-link", "two-node-device", "three-node-link",
          "three-node-device", "toffoli-grid", "noise-comparison"};
}

std::vector<FigureSweep> builtin_figure(const std::string& figure_id) {
  static const char* kTwoNodeGates[] = {"CNOT", "DCNOT", "CZ", "SWAP"};

  if (figure_id == "two-node-link") {
    std::vector<FigureSweep> sweeps;
    for (const char* g : kTwoNodeGates) {
      ExperimentSpec spec = figure_spec(ProtocolKind::TwoNodeGate, g, RunOptions::Mode::Sampled);
      spec.sweeps = {sweep_of("link.fidelity", ascending_link_grid())};
      sweeps.push_back({g, std::move(spec)});
    }
    return sweeps;
  }
  if (figure_id == "two-node-device") {
    std::vector<FigureSweep> sweeps;
    for (const char* g : kTwoNodeGates) {
      ExperimentSpec spec = figure_spec(ProtocolKind::TwoNodeGate, g, RunOptions::Mode::Sampled);
      spec.sweeps = {sweep_of("device.depol", default_depol_grid())};
      sweeps.push_back({g, std::move(spec)});
    }
    return sweeps;
  }
  if (figure_id == "three-node-link") {
    ExperimentSpec spec = figure_spec(ProtocolKind::ThreeNodeGate, "CNOT", RunOptions::Mode::Exact);
    spec.sweeps = {sweep_of("link.input0-gate.fidelity", ascending_link_grid()),
                   sweep_of("link.input1-gate.fidelity", ascending_link_grid())};
    return {{"CNOT", std::move(spec)}};
  }
  if (figure_id == "three-node-device") {
    ExperimentSpec spec = figure_spec(ProtocolKind::ThreeNodeGate, "CNOT", RunOptions::Mode::Exact);
    spec.sweeps = {sweep_of("device.input0.depol", default_depol_grid()),
                   sweep_of("device.gate.depol", default_depol_grid())};
    return {{"CNOT", std::move(spec)}};
  }
  if (figure_id == "toffoli-grid") {
    ExperimentSpec spec = figure_spec(ProtocolKind::Toffoli, "", RunOptions::Mode::Exact);
    spec.sweeps = {sweep_of("link.fidelity", ascending_link_grid()),
                   sweep_of("device.gate.depol", default_depol_grid())};
    return {{"TOFF", std::move(spec)}};
  }
  if (figure_id == "noise-comparison") {
    return {};  // run_reproduce handles this figure directly
  }
  throw ValidationError("unknown figure '" + figure_id + "'; figures: " + join(figure_ids(), ", "));
}

std::string ComparisonReport::to_text() const {
  std::string out = "link vs device noise: " + protocol_label + "\n";
  out += "step,link_fidelity,depol,fidelity_link_only,fidelity_device_only\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ComparisonPoint& p = points[i];
    out += std::to_string(i) + "," + fmt_double(p.link_fidelity) + "," + fmt_double(p.depol) + "," +
           fmt_double(p.link_curve) + "," + fmt_double(p.device_curve) + "\n";
  }
  if (ordering_holds) {
    out += "ordering: device-only fidelity at or below link-only fidelity at every step\n";
  } else {
    out += "ordering: VIOLATED at step(s)";
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].device_curve > points[i].link_curve + kOrderingTolerance) {
        out += " " + std::to_string(i);
      }
    }
    out += "; the comparison is parameterization-dependent\n";
  }
  return out;
}

ComparisonReport link_vs_device_comparison(ProtocolKind kind, const std::string& gate,
                                           const std::vector<double>& link_grid,
                                           const std::vector<double>& depol_grid) {
  if (link_grid.empty() || link_grid.size() != depol_grid.size()) {
    throw ValidationError("comparison grids must be non-empty and equally long");
  }

  ExperimentSpec spec = figure_spec(kind, gate, RunOptions::Mode::Exact);
  finalize_spec(spec);

  ComparisonReport report;
  report.protocol_label = protocol_name(kind) + (gate.empty() ? "" : " " + gate);
  for (std::size_t i = 0; i < link_grid.size(); ++i) {
    NoiseSettings link_ns = default_noise(kind);
    apply_noise_path(link_ns, kind, "link.fidelity", link_grid[i]);
    NoiseSettings dev_ns = default_noise(kind);
    apply_noise_path(dev_ns, kind, "device.depol", depol_grid[i]);

    ComparisonPoint point;
    point.link_fidelity = link_grid[i];
    point.depol = depol_grid[i];
    point.link_curve = execute_point(spec, link_ns, RunOptions::Mode::Exact, 0).fidelity;
    point.device_curve = execute_point(spec, dev_ns, RunOptions::Mode::Exact, 0).fidelity;
    if (point.device_curve > point.link_curve + kOrderingTolerance) report.ordering_holds = false;
    report.points.push_back(point);
  }
  return report;
}

ReproduceResult run_reproduce(const std::string& figure_id, const std::string& out_dir,
                              const std::string& mode_override) {
  const std::vector<std::string> ids = figure_ids();
  if (std::find(ids.begin(), ids.end(), figure_id) == ids.end()) {
    throw ValidationError("unknown figure '" + figure_id + "'; figures: " + join(ids, ", "));
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ValidationError("cannot create directory '" + out_dir + "': " + ec.message());

  auto out_path = [&](const std::string& name) {
    return (std::filesystem::path(out_dir) / name).string();
  };

  ReproduceResult result;

  if (figure_id == "noise-comparison") {
    struct Case {
      ProtocolKind kind;
      const char* gate;
      const char* label;
    };
    for (const Case& c : {Case{ProtocolKind::ThreeNodeGate, "CNOT", "three-node-cnot"},
                          Case{ProtocolKind::Toffoli, "", "toffoli"}}) {
      const ComparisonReport report =
          link_vs_device_comparison(c.kind, c.gate, default_link_grid(), default_depol_grid());
      result.comparison_flagged |= !report.ordering_holds;

      const std::string txt = out_path("noise-comparison-" + std::string(c.label) + ".txt");
      std::ofstream file(txt, std::ios::binary);
      if (!file) throw ValidationError("cannot write '" + txt + "'");
      file << report.to_text();
      file.close();
      result.files.push_back(txt);

      Curve link_curve{"link noise only", {}};
      Curve dev_curve{"device noise only", {}};
      for (std::size_t i = 0; i < report.points.size(); ++i) {
        link_curve.points.push_back({static_cast<double>(i), report.points[i].link_curve, 0});
        dev_curve.points.push_back({static_cast<double>(i), report.points[i].device_curve, 0});
      }
      const std::string svg = out_path("noise-comparison-" + std::string(c.label) + ".svg");
      write_svg_curves(svg, report.protocol_label + ": matched noise steps", "noise step",
                       {link_curve, dev_curve});
      result.files.push_back(svg);
    }
    return result;
  }

  std::vector<Curve> curves;
  std::string x_label;
  for (const FigureSweep& fig : builtin_figure(figure_id)) {
    ExperimentSpec spec = fig.spec;
    if (!mode_override.empty()) {
      const std::string m = lower(mode_override);
      if (m == "exact") {
        spec.mode = RunOptions::Mode::Exact;
      } else if (m == "sampled") {
        spec.mode = RunOptions::Mode::Sampled;
      } else {
        throw ValidationError("unknown mode '" + mode_override + "'; modes: exact, sampled");
      }
    }
    const std::vector<SweepRecord> records = run_sweep(spec);

    const std::string csv = out_path(figure_id + "-" + lower(fig.label) + ".csv");
    emit_csv(records, csv);
    result.files.push_back(csv);

    if (spec.sweeps.size() == 1) {
      x_label = spec.sweeps[0].path;
      curves.push_back({fig.label, aggregate_records(records, 0)});
    } else {
      // Grid sweep: one curve per value of the first parameter.
      x_label = spec.sweeps[1].path;
      for (double v : spec.sweeps[0].values) {
        std::vector<SweepRecord> slice;
        for (const SweepRecord& r : records) {
          if (r.params[0].second == v) slice.push_back(r);
        }
        char label[64];
        std::snprintf(label, sizeof label, "%s=%g", spec.sweeps[0].path.c_str(), v);
        std::vector<SweepRecord> reindexed;
        for (SweepRecord r : slice) {
          r.params.erase(r.params.begin());
          reindexed.push_back(std::move(r));
        }
        curves.push_back({label, aggregate_records(reindexed, 0)});
      }
    }
  }

  const std::string svg = out_path(figure_id + ".svg");
  write_svg_curves(svg, figure_id, x_label, curves);
  result.files.push_back(svg);
  return result;
}

}  // namespace tsim
