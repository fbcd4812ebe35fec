#pragma once

#include <string>
#include <vector>

#include "transl2e/dataset.hpp"

namespace transl2e {

// How to read a tabular file into a Dataset. Columns are referenced by header
// name when has_header is set, otherwise by 1-based index written as digits.
struct CsvSchema {
  std::string response;               // required
  std::vector<std::string> features;  // empty = all non-response columns
  bool has_header = true;
  bool standardize = false;  // center and scale features to unit sample sd
};

// Parses the file; any ragged row or non-numeric cell raises a parse error
// naming the row and column. Row labels are the 1-based data row numbers.
Dataset load_dataset(const std::string& path, const CsvSchema& schema);

// 17 significant digits, so a write/load round trip reproduces every value
void write_dataset_csv(const std::string& path, const Dataset& d,
                       const std::string& response_name = "y");

}  // namespace transl2e
