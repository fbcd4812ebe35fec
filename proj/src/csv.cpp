#include "transl2e/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace transl2e {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, std::size_t row, std::size_t col,
                  const std::string& path) {
  const std::string s = trim(raw);
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (s.empty() || end != begin + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument(path + ": non-numeric cell at row " +
                                std::to_string(row) + ", column " +
                                std::to_string(col + 1) + ": '" + s + "'");
  }
  return v;
}

std::size_t resolve_column(const std::string& ref,
                           const std::vector<std::string>& header, bool has_header,
                           std::size_t width, const std::string& path) {
  if (has_header) {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (trim(header[j]) == ref) return j;
    }
    throw std::invalid_argument(path + ": column '" + ref + "' not found in header");
  }
  char* end = nullptr;
  const long idx = std::strtol(ref.c_str(), &end, 10);
  if (*end != '\0' || idx < 1 || static_cast<std::size_t>(idx) > width) {
    throw std::invalid_argument(path + ": column index '" + ref +
                                "' out of range 1.." + std::to_string(width));
  }
  return static_cast<std::size_t>(idx - 1);
}

}  // namespace

Dataset load_dataset(const std::string& path, const CsvSchema& schema) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open " + path);

  std::string line;
  std::vector<std::string> header;
  if (schema.has_header) {
    if (!std::getline(f, line)) throw std::invalid_argument(path + ": empty file");
    header = split_row(line);
  }

  std::vector<std::vector<std::string>> raw_rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    raw_rows.push_back(split_row(line));
  }
  if (raw_rows.empty()) throw std::invalid_argument(path + ": no data rows");

  const std::size_t width = schema.has_header ? header.size() : raw_rows[0].size();
  for (std::size_t i = 0; i < raw_rows.size(); ++i) {
    if (raw_rows[i].size() != width) {
      throw std::invalid_argument(path + ": ragged row " + std::to_string(i + 1) +
                                  " (has " + std::to_string(raw_rows[i].size()) +
                                  " cells, expected " + std::to_string(width) + ")");
    }
  }

  const std::size_t y_col = resolve_column(schema.response, header,
                                           schema.has_header, width, path);
  std::vector<std::size_t> x_cols;
  if (schema.features.empty()) {
    for (std::size_t j = 0; j < width; ++j) {
      if (j != y_col) x_cols.push_back(j);
    }
  } else {
    for (const std::string& ref : schema.features) {
      const std::size_t j = resolve_column(ref, header, schema.has_header, width, path);
      if (j == y_col) {
        throw std::invalid_argument(path + ": response column '" + schema.response +
                                    "' listed among the features");
      }
      x_cols.push_back(j);
    }
  }
  if (x_cols.empty()) throw std::invalid_argument(path + ": no feature columns");

  Dataset d;
  const auto n = static_cast<Eigen::Index>(raw_rows.size());
  d.X.resize(n, static_cast<Eigen::Index>(x_cols.size()));
  d.y.resize(n);
  d.labels.reserve(raw_rows.size());
  for (std::size_t i = 0; i < raw_rows.size(); ++i) {
    d.y[static_cast<Eigen::Index>(i)] = parse_cell(raw_rows[i][y_col], i + 1, y_col, path);
    for (std::size_t a = 0; a < x_cols.size(); ++a) {
      d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) =
          parse_cell(raw_rows[i][x_cols[a]], i + 1, x_cols[a], path);
    }
    d.labels.push_back(std::to_string(i + 1));
  }

  if (schema.standardize) {
    const double nn = static_cast<double>(d.X.rows());
    for (Eigen::Index j = 0; j < d.X.cols(); ++j) {
      const double mean = d.X.col(j).mean();
      d.X.col(j).array() -= mean;
      const double sd = std::sqrt(d.X.col(j).squaredNorm() / (nn - 1.0));
      if (!(sd > 0.0)) {
        throw std::invalid_argument(path + ": feature column " + std::to_string(j + 1) +
                                    " is constant; cannot standardize");
      }
      d.X.col(j) /= sd;
    }
  }

  d.validate();
  return d;
}

void write_dataset_csv(const std::string& path, const Dataset& d,
                       const std::string& response_name) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << response_name;
  for (Eigen::Index j = 0; j < d.n_cols(); ++j) f << ",x" << (j + 1);
  f << '\n';
  char buf[40];
  for (Eigen::Index i = 0; i < d.n_rows(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", d.y[i]);
    f << buf;
    for (Eigen::Index j = 0; j < d.n_cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", d.X(i, j));
      f << ',' << buf;
    }
    f << '\n';
  }
}

}  // namespace transl2e
