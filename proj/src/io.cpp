#include "tqe/io.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "tqe/error.hpp"

namespace tqe {

std::string format_real17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: EVP_Digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("sha256_file: cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

void atomic_write_file(const std::string& path, const std::string& content) {
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open for writing: " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::string iso8601_utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CsvWriter::CsvWriter(std::string path, std::vector<std::string> columns)
    : path_(std::move(path)), n_columns_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += columns[i];
  }
  buffer_ += '\n';
}

void CsvWriter::add_row(const std::vector<CsvValue>& row) {
  if (row.size() != n_columns_)
    throw std::logic_error("CsvWriter: row arity does not match header");
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) buffer_ += ',';
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>)
            buffer_ += format_real17(v);
          else if constexpr (std::is_same_v<T, std::string>)
            buffer_ += v;
          else
            buffer_ += std::to_string(v);
        },
        row[i]);
  }
  buffer_ += '\n';
}

std::string CsvWriter::commit() {
  atomic_write_file(path_, buffer_);
  return sha256_hex(buffer_);
}

std::string CsvWriter::body() const { return buffer_; }

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = tool;
  j["version"] = version;
  j["command"] = command;
  j["kernel"] = kernel;
  j["seed"] = seed;
  j["threads"] = threads;
  j["threads_source"] = threads_source;
  j["parameters"] = parameters;
  nlohmann::json outs = nlohmann::json::object();
  for (const auto& [name, digest] : output_digests) outs[name] = "sha256:" + digest;
  j["outputs"] = outs;
  if (!notes.empty()) j["notes"] = notes;
  j["started"] = started;
  j["finished"] = finished;
  return j.dump(2);
}

void RunManifest::write(const std::string& path) const { atomic_write_file(path, to_json() + "\n"); }

}  // namespace tqe
