#include "gefhole/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <istream>
#include <ostream>

#include "gefhole/errors.hpp"

namespace gefhole {

std::string library_version() { return GEFHOLE_VERSION; }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const json& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(cfg.dump())));
  return buf;
}

json make_header(const std::string& command, const json& cfg, std::uint64_t seed, bool timestamp) {
  json h;
  h["gefhole"] = library_version();
  h["command"] = command;
  h["config_hash"] = config_hash(cfg);
  h["seed"] = seed;
  h["config"] = cfg;
  if (timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    h["timestamp"] = buf;
  }
  return h;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const json& header, const std::vector<std::string>& columns)
    : out_(out), width_(columns.size()) {
  for (const auto& [k, v] : header.items())
    out_ << "# " << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw ArgumentError("CsvWriter: row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
}

json sample_record(std::uint64_t seed, const ZeroConfig& zc) {
  json zs = json::array();
  for (const auto& z : zc.zeros) zs.push_back({z.real(), z.imag()});
  return {{"seed", seed}, {"N", zc.size()}, {"L", zc.scale}, {"zeros", std::move(zs)}};
}

ZeroConfig zeros_from_record(const json& rec) {
  try {
    ZeroConfig zc;
    zc.scale = rec.at("L").get<double>();
    for (const auto& z : rec.at("zeros")) zc.zeros.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
    if (zc.size() != rec.at("N").get<int>()) throw ArgumentError("sample record: N does not match zeros");
    return zc;
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("sample record: ") + e.what());
  }
}

SampleStream read_ndjson(std::istream& in) {
  SampleStream s;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ArgumentError("ndjson line " + std::to_string(lineno) + ": " + e.what());
    }
    if (j.contains("header")) {
      s.header = j["header"];
      continue;
    }
    s.samples.push_back(zeros_from_record(j));
    s.seeds.push_back(j.value("seed", std::uint64_t{0}));
  }
  return s;
}

json to_json(const RadialMeasure& nu) {
  json atoms = json::array(), annuli = json::array();
  for (const auto& a : nu.atoms()) atoms.push_back({{"r", a.radius}, {"mass", a.mass}});
  for (const auto& a : nu.annuli()) annuli.push_back({{"lo", a.lo}, {"hi", a.hi}, {"c", a.c}});
  return {{"atoms", std::move(atoms)}, {"annuli", std::move(annuli)}};
}

RadialMeasure measure_from_json(const json& j) {
  try {
    std::vector<CircleAtom> atoms;
    std::vector<Annulus> annuli;
    for (const auto& a : j.at("atoms")) atoms.push_back({a.at("r").get<double>(), a.at("mass").get<double>()});
    for (const auto& a : j.at("annuli"))
      annuli.push_back({a.at("lo").get<double>(), a.at("hi").get<double>(), a.at("c").get<double>()});
    return RadialMeasure(std::move(atoms), std::move(annuli));
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("measure json: ") + e.what());
  }
}

json to_json(const ShellGrid& g) {
  return {{"alpha", g.alpha},
          {"constraint", g.constraint.label()},
          {"p", g.constraint.p},
          {"unit_index", g.unit_index},
          {"radii", g.radii},
          {"masses", g.masses}};
}

}  // namespace gefhole
