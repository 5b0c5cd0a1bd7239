#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qgs::cli {

/// Full-precision, locale-independent formatting; 17 significant digits so
/// round-tripping a double is lossless for downstream fits.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Minimal RFC-4180 writer. All our fields are numbers or bare words, so
/// quoting only has to handle the general case defensively.
class CsvWriter {
public:
  void row(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) {
        line += ',';
      }
      line += escape(cells[i]);
    }
    body_ += line + "\r\n";
  }
  const std::string& str() const { return body_; }

private:
  static std::string escape(const std::string& cell) {
    if (cell.find_first_of(",\"\r\n") == std::string::npos) {
      return cell;
    }
    std::string out = "\"";
    for (char c : cell) {
      out += c;
      if (c == '"') {
        out += '"';
      }
    }
    return out + "\"";
  }
  std::string body_;
};

inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string digest_hex(const std::string& data) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Accumulates everything one command run produced and writes the artifacts
/// plus exactly one accompanying manifest.
class RunArtifacts {
public:
  RunArtifacts(std::string command, std::string prefix)
      : command_(std::move(command)), prefix_(std::move(prefix)),
        start_(std::chrono::steady_clock::now()) {}

  void parameter(const std::string& key, const nlohmann::json& value) {
    parameters_[key] = value;
  }
  void input(const std::filesystem::path& path) {
    inputs_[path.string()] = digest_hex(read_file(path));
  }
  void residual(const std::string& key, double value) { residuals_[key] = value; }
  void tolerances(double rel, double abs) {
    tolerances_ = {{"rel_tol", rel}, {"abs_tol", abs}};
  }

  std::filesystem::path write(const std::string& suffix, const std::string& body) {
    const std::filesystem::path path = prefix_ + suffix;
    std::ofstream out(path, std::ios::binary);
    out << body;
    outputs_[path.filename().string()] = digest_hex(body);
    return path;
  }

  std::filesystem::path finish(const char* version) {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    nlohmann::json manifest{
        {"command", command_},
        {"parameters", parameters_},
        {"inputs", inputs_},
        {"outputs", outputs_},
        {"tolerances", tolerances_},
        {"residuals", residuals_},
        {"version", version},
        {"duration_seconds", std::chrono::duration<double>(elapsed).count()},
    };
    const std::filesystem::path path = prefix_ + ".manifest.json";
    std::ofstream out(path, std::ios::binary);
    out << manifest.dump(2) << "\n";
    return path;
  }

private:
  std::string command_;
  std::string prefix_;
  std::chrono::steady_clock::time_point start_;
  nlohmann::json parameters_ = nlohmann::json::object();
  nlohmann::json tolerances_ = nlohmann::json::object();
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
  std::map<std::string, double> residuals_;
};

} // namespace qgs::cli
