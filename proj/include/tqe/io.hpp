#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace tqe {

/// Floating values serialize with 17 significant digits (%.17g): enough to
/// round-trip any double bit-exactly.
std::string format_real17(double v);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

/// Write-to-temp + rename; no partial file is ever visible at `path`.
void atomic_write_file(const std::string& path, const std::string& content);

std::string iso8601_utc_now();

using CsvValue = std::variant<std::int64_t, std::uint64_t, double, std::string>;

/// Buffered CSV emitter with a fixed column set; commit() writes atomically
/// and returns the sha256 of the final bytes.
class CsvWriter {
 public:
  CsvWriter(std::string path, std::vector<std::string> columns);
  void add_row(const std::vector<CsvValue>& row);
  std::string commit();
  const std::string& path() const { return path_; }
  std::string body() const;

 private:
  std::string path_;
  std::size_t n_columns_;
  std::string buffer_;
};

struct RunManifest {
  std::string tool = "torusqe";
  std::string version;
  std::string command;
  std::string kernel;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string threads_source;  // flag | env | default
  std::map<std::string, std::string> parameters;
  std::map<std::string, std::string> output_digests;  // file name -> sha256:<hex>
  std::map<std::string, std::string> notes;
  std::string started;
  std::string finished;

  std::string to_json() const;
  void write(const std::string& path) const;
};

}  // namespace tqe
