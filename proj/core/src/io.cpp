#include "mslab/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace mslab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // trim to the shortest representation that round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fingerprint_hex(const std::string& canonical) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

std::filesystem::path output_root() {
  if (const char* env = std::getenv("MSLAB_OUT"); env && *env)
    return std::filesystem::path(env);
  return std::filesystem::path("mslab-out");
}

void CsvWriter::set_meta(const std::string& key, const std::string& value) {
  meta_.emplace_back(key, value);
}

void CsvWriter::set_columns(std::vector<std::string> names) {
  columns_ = std::move(names);
}

void CsvWriter::add_row(std::vector<Cell> cells) {
  if (!columns_.empty() && cells.size() != columns_.size())
    throw std::invalid_argument("CsvWriter: row width != column count");
  rows_.push_back(std::move(cells));
}

namespace {

// strings holding separators, quotes, or line breaks must be quoted with
// embedded quotes doubled or the file stops being parseable
std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string CsvWriter::to_string() const {
  std::ostringstream os;
  for (const auto& [k, v] : meta_) os << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i)
    os << csv_escape(columns_[i]) << (i + 1 < columns_.size() ? "," : "");
  if (!columns_.empty()) os << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (std::holds_alternative<double>(row[i]))
        os << format_double(std::get<double>(row[i]));
      else if (std::holds_alternative<std::int64_t>(row[i]))
        os << std::get<std::int64_t>(row[i]);
      else
        os << csv_escape(std::get<std::string>(row[i]));
      os << (i + 1 < row.size() ? "," : "");
    }
    os << "\n";
  }
  return os.str();
}

void CsvWriter::write(const std::filesystem::path& file) const {
  if (!file.parent_path().empty())
    std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw std::runtime_error("cannot open " + file.string());
  out << to_string();
}

void RunManifest::write(const std::filesystem::path& file) const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["config"] = config_text;
  j["seed"] = seed;
  j["fingerprint"] = fingerprint;
  j["wall_time_seconds"] = wall_time_seconds;
  j["status"] = status;
  if (!error.empty()) j["error"] = error;
  j["versions"] = {{"mslab", "0.1.0"},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)}};
  nlohmann::json outs = nlohmann::json::object();
  for (const auto& [k, v] : outputs) outs[k] = v;
  j["outputs"] = outs;
  if (!file.parent_path().empty())
    std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + file.string());
  out << j.dump(2) << "\n";
}

}  // namespace mslab
