#pragma once

// Tabular binary-response data: CSV ingestion, intercept handling, and the
// standardization protocol (binary 0/1 columns centered; all other covariate
// columns centered and scaled to sample standard deviation 0.5).

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepbayes {

struct Dataset {
  Eigen::MatrixXd X;                        // n x p design matrix
  Eigen::VectorXi y;                        // binary response, entries 0/1
  std::vector<std::string> names;           // p column labels
  std::optional<Eigen::Index> intercept_index;
  bool standardized = false;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

inline void validate_dataset(const Dataset& d) {
  if (d.n() < 1 || d.p() < 1)
    throw std::invalid_argument("dataset must have n >= 1 and p >= 1");
  if (d.y.size() != d.n())
    throw std::invalid_argument("dataset: y length does not match X rows");
  if (static_cast<Eigen::Index>(d.names.size()) != d.p())
    throw std::invalid_argument("dataset: names length does not match X cols");
  if (!d.X.allFinite())
    throw std::invalid_argument("dataset: X has non-finite entries");
  for (Eigen::Index i = 0; i < d.n(); ++i)
    if (d.y(i) != 0 && d.y(i) != 1)
      throw std::invalid_argument("dataset: y entries must be 0 or 1");
  if (d.intercept_index) {
    const Eigen::Index j = *d.intercept_index;
    if (j < 0 || j >= d.p())
      throw std::invalid_argument("dataset: intercept index out of range");
    if ((d.X.col(j).array() != 1.0).any())
      throw std::invalid_argument(
          "dataset: intercept column is not identically 1");
  }
}

enum class CsvHeader { Auto, Present, Absent };

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  try {
    std::size_t pos = 0;
    out = std::stod(t, &pos);
    return pos == t.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace detail

// Load a CSV file with an optional header row. `response` selects the 0/1
// response column by name (columns of headerless files are named c0, c1, ...);
// an empty `response` means the first column.
inline Dataset load_csv(const std::string& path,
                        const std::string& response = "",
                        CsvHeader header = CsvHeader::Auto) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!detail::trim(line).empty()) lines.push_back(line);
  }
  if (lines.empty()) throw std::runtime_error("empty file: " + path);

  const std::vector<std::string> first = detail::split_csv_line(lines[0]);
  const std::size_t ncol = first.size();
  if (ncol < 2)
    throw std::runtime_error(path + ": need at least two columns");

  bool has_header = false;
  if (header == CsvHeader::Present) {
    has_header = true;
  } else if (header == CsvHeader::Auto) {
    double tmp;
    for (const auto& cell : first)
      if (!detail::parse_double(cell, tmp)) has_header = true;
  }

  std::vector<std::string> names(ncol);
  if (has_header) {
    for (std::size_t j = 0; j < ncol; ++j) names[j] = detail::trim(first[j]);
  } else {
    for (std::size_t j = 0; j < ncol; ++j) names[j] = "c" + std::to_string(j);
  }

  std::size_t resp_col = 0;
  if (!response.empty()) {
    bool found = false;
    for (std::size_t j = 0; j < ncol; ++j)
      if (names[j] == response) {
        resp_col = j;
        found = true;
        break;
      }
    if (!found)
      throw std::runtime_error(path + ": response column '" + response +
                               "' not found");
  }

  const std::size_t first_data = has_header ? 1 : 0;
  const std::size_t nrow = lines.size() - first_data;
  if (nrow == 0) throw std::runtime_error(path + ": no data rows");

  Dataset d;
  d.X.resize(static_cast<Eigen::Index>(nrow), static_cast<Eigen::Index>(ncol - 1));
  d.y.resize(static_cast<Eigen::Index>(nrow));
  for (std::size_t j = 0; j < ncol; ++j)
    if (j != resp_col) d.names.push_back(names[j]);

  for (std::size_t r = 0; r < nrow; ++r) {
    const std::vector<std::string> cells =
        detail::split_csv_line(lines[first_data + r]);
    const std::size_t file_line = first_data + r + 1;
    if (cells.size() != ncol)
      throw std::runtime_error(path + ": row " + std::to_string(file_line) +
                               " has " + std::to_string(cells.size()) +
                               " cells, expected " + std::to_string(ncol));
    Eigen::Index xj = 0;
    for (std::size_t j = 0; j < ncol; ++j) {
      double value;
      if (!detail::parse_double(cells[j], value))
        throw std::runtime_error(path + ": non-numeric cell at row " +
                                 std::to_string(file_line) + ", column '" +
                                 names[j] + "'");
      if (j == resp_col) {
        if (value != 0.0 && value != 1.0)
          throw std::runtime_error(path + ": response value outside {0,1} at "
                                   "row " +
                                   std::to_string(file_line));
        d.y(static_cast<Eigen::Index>(r)) = static_cast<int>(value);
      } else {
        d.X(static_cast<Eigen::Index>(r), xj++) = value;
      }
    }
  }
  validate_dataset(d);
  return d;
}

// Prepend a column of ones named "intercept".
inline Dataset add_intercept(const Dataset& d) {
  validate_dataset(d);
  if (d.intercept_index)
    throw std::invalid_argument("add_intercept: intercept already present");
  Dataset out;
  out.X.resize(d.n(), d.p() + 1);
  out.X.col(0).setOnes();
  out.X.rightCols(d.p()) = d.X;
  out.y = d.y;
  out.names.reserve(d.names.size() + 1);
  out.names.push_back("intercept");
  out.names.insert(out.names.end(), d.names.begin(), d.names.end());
  out.intercept_index = 0;
  out.standardized = d.standardized;
  return out;
}

struct ColumnStandardization {
  enum class Action { None, Center, CenterScale };
  Action action = Action::None;
  double shift = 0.0;
  double divisor = 1.0;
};

struct StandardizationRecord {
  std::vector<ColumnStandardization> columns;
};

// Per-column treatment override for standardize(); Auto applies the binary
// detection rule, the others force a treatment (e.g. leave interaction
// columns alone).
enum class ColumnTreatment { Auto, Leave, CenterOnly, CenterAndScale };

// Center binary (exactly {0,1}-valued) covariate columns; center and scale
// every other covariate column to sample sd 0.5 (n-1 denominator). The
// intercept column is untouched. Standardizing already-standardized data is
// an exact no-op.
inline std::pair<Dataset, StandardizationRecord> standardize(
    const Dataset& d,
    const std::vector<ColumnTreatment>& overrides = {}) {
  validate_dataset(d);
  if (!overrides.empty() &&
      static_cast<Eigen::Index>(overrides.size()) != d.p())
    throw std::invalid_argument("standardize: overrides length mismatch");

  StandardizationRecord record;
  record.columns.assign(static_cast<std::size_t>(d.p()), {});
  Dataset out = d;
  if (d.standardized) return {out, record};

  for (Eigen::Index j = 0; j < d.p(); ++j) {
    auto& col_record = record.columns[static_cast<std::size_t>(j)];
    if (d.intercept_index && *d.intercept_index == j) continue;
    const ColumnTreatment treat =
        overrides.empty() ? ColumnTreatment::Auto
                          : overrides[static_cast<std::size_t>(j)];
    if (treat == ColumnTreatment::Leave) continue;

    const Eigen::VectorXd col = d.X.col(j);
    const double mean = col.mean();

    bool binary = true;
    bool saw0 = false, saw1 = false;
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      if (col(i) == 0.0)
        saw0 = true;
      else if (col(i) == 1.0)
        saw1 = true;
      else {
        binary = false;
        break;
      }
    }
    binary = binary && saw0 && saw1;

    bool center_only = binary;
    if (treat == ColumnTreatment::CenterOnly) center_only = true;
    if (treat == ColumnTreatment::CenterAndScale) center_only = false;

    if (center_only) {
      col_record.action = ColumnStandardization::Action::Center;
      col_record.shift = mean;
      out.X.col(j) = col.array() - mean;
    } else {
      if (d.n() < 2)
        throw std::invalid_argument(
            "standardize: cannot scale column '" + d.names[j] +
            "' with a single observation");
      const double sd =
          std::sqrt((col.array() - mean).square().sum() / (d.n() - 1));
      if (!(sd > 0.0))
        throw std::invalid_argument("standardize: column '" + d.names[j] +
                                    "' is constant (zero variance)");
      const double divisor = sd / 0.5;
      col_record.action = ColumnStandardization::Action::CenterScale;
      col_record.shift = mean;
      col_record.divisor = divisor;
      out.X.col(j) = (col.array() - mean) / divisor;
    }
  }
  out.standardized = true;
  return {out, record};
}

// Apply a previously computed record to a compatible design matrix (used to
// transform test data with the training-set record).
inline Eigen::MatrixXd apply_record(const StandardizationRecord& record,
                                    const Eigen::MatrixXd& X) {
  if (static_cast<Eigen::Index>(record.columns.size()) != X.cols())
    throw std::invalid_argument(
        "apply_record: record does not match the design matrix (" +
        std::to_string(record.columns.size()) + " recorded columns vs " +
        std::to_string(X.cols()) + ")");
  Eigen::MatrixXd out = X;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const auto& c = record.columns[static_cast<std::size_t>(j)];
    switch (c.action) {
      case ColumnStandardization::Action::None:
        break;
      case ColumnStandardization::Action::Center:
        out.col(j) = X.col(j).array() - c.shift;
        break;
      case ColumnStandardization::Action::CenterScale:
        out.col(j) = (X.col(j).array() - c.shift) / c.divisor;
        break;
    }
  }
  return out;
}

}  // namespace sepbayes
