#pragma once

// Run artifacts: CSV tables ('.' decimal, UTF-8, LF), JSON manifests, stable
// config fingerprints, output directory resolution via MSLAB_OUT.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace mslab {

std::string format_double(double v);  // shortest round-trip, C locale

std::uint64_t fnv1a64(const std::string& s);
std::string fingerprint_hex(const std::string& canonical);

// $MSLAB_OUT, or "./mslab-out" when unset.
std::filesystem::path output_root();

class CsvWriter {
 public:
  using Cell = std::variant<double, std::int64_t, std::string>;

  void set_meta(const std::string& key, const std::string& value);
  void set_columns(std::vector<std::string> names);
  void add_row(std::vector<Cell> cells);
  void write(const std::filesystem::path& file) const;
  std::string to_string() const;

 private:
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

struct RunManifest {
  std::string experiment;
  std::string config_text;   // effective key=value config after overrides
  std::uint64_t seed = 0;
  std::string fingerprint;
  double wall_time_seconds = 0.0;
  std::string status = "ok";
  std::string error;
  std::vector<std::pair<std::string, std::string>> outputs;  // name -> file

  void write(const std::filesystem::path& file) const;
};

}  // namespace mslab
