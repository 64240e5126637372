#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gefhole/energy_optimizer.hpp"
#include "gefhole/radial_measures.hpp"
#include "gefhole/rootfinder.hpp"

namespace gefhole {

using json = nlohmann::json;

std::string library_version();

std::uint64_t fnv1a64(std::string_view bytes);

/// 16 hex digits of FNV-1a over the compact dump of cfg (keys sorted by nlohmann).
std::string config_hash(const json& cfg);

/// {"gefhole": version, "command", "config_hash", "seed", "config"} plus "timestamp" when asked.
json make_header(const std::string& command, const json& cfg, std::uint64_t seed, bool timestamp);

/// Doubles printed with 17 significant digits so files round-trip.
std::string format_double(double x);

class CsvWriter {
 public:
  /// Writes the header as "# key=value" comment lines, then the column row.
  CsvWriter(std::ostream& out, const json& header, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t width_;
};

// NDJSON sample streams: first line {"header": {...}}, then one record per sample.
json sample_record(std::uint64_t seed, const ZeroConfig& zc);
ZeroConfig zeros_from_record(const json& rec);

struct SampleStream {
  json header;
  std::vector<ZeroConfig> samples;
  std::vector<std::uint64_t> seeds;
};

/// Throws ArgumentError on malformed lines.
SampleStream read_ndjson(std::istream& in);

json to_json(const RadialMeasure& nu);
RadialMeasure measure_from_json(const json& j);
json to_json(const ShellGrid& g);

}  // namespace gefhole
