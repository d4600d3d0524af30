#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "edkg/types.hpp"

namespace edkg::cli {

using Json = nlohmann::json;

/// 17 significant digits, scientific notation.
std::string format_real(double value);

/// Sorted keys, two-space indent, reals through format_real, non-finite reals as null.
std::string dump_json(const Json& value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// "N M" then N rows of M "re+imj" tokens.
std::string dump_matrix(const Matrix& m);

void write_file(const std::string& path, const std::string& contents);

}  // namespace edkg::cli
