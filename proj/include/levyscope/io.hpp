// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace levyscope {

/// CSV writer: provenance comment lines, one header row, data rows printed
/// with 17 significant digits so reruns are byte-comparable.
class CsvWriter {
 public:
  CsvWriter(const std::string& path,
            const std::map<std::string, std::string>& provenance,
            const std::vector<std::string>& columns);

  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);

  static std::string format(double v);

 private:
  std::ofstream out_;
  size_t columns_ = 0;
};

}  // namespace levyscope
