/*
 * io.hpp — deterministic file output: CSV tables ('.' decimals, '\n' line
 * endings, mandatory header) and JSON reports, both written atomically
 * (tmp + rename) so partial files never appear under the output paths.
 */

#pragma once

#include "specmet/core.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace specmet {

using Json = nlohmann::json;

// Shortest exact decimal form; stable across runs of the same binary.
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& values);

  const std::string& content() const { return buffer_; }
  std::size_t rows() const { return rows_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string buffer_;
};

void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace specmet
