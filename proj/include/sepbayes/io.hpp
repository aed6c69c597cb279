#pragma once

// Serialization: draws CSV files, run-metadata JSON sidecars, and run
// manifests.  All JSON output uses ordered maps so key order is stable
// across runs and platforms.

#include <cstdio>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include <sepbayes/dataset.hpp>
#include <sepbayes/link.hpp>
#include <sepbayes/priors.hpp>
#include <sepbayes/samplers.hpp>
#include <sepbayes/separation.hpp>

namespace sepbayes {

using ordered_json = nlohmann::ordered_json;

namespace detail {

// Shortest round-trip decimal representation of a double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf);
}

inline std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

inline std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Draws CSV: one row per retained draw, columns = coefficient names + chain.
// ---------------------------------------------------------------------------

inline void write_draws_csv(const std::string& path, const Draws& draws) {
  std::ofstream out = detail::open_for_write(path);
  for (std::size_t j = 0; j < draws.names.size(); ++j)
    out << draws.names[j] << ',';
  out << "chain\n";
  for (Eigen::Index s = 0; s < draws.S(); ++s) {
    for (Eigen::Index j = 0; j < draws.p(); ++j)
      out << detail::format_double(draws.samples(s, j)) << ',';
    out << draws.chain_ids[static_cast<std::size_t>(s)] << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

// Reads a draws CSV produced by write_draws_csv.  Only samples, chain ids,
// and names are recoverable from the CSV itself; labelled metadata lives in
// the JSON sidecar.
inline Draws read_draws_csv(const std::string& path) {
  std::ifstream in = detail::open_for_read(path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("draws file is empty: " + path);
  std::vector<std::string> header = detail::split_csv_line(line);
  if (header.empty() || detail::trim(header.back()) != "chain")
    throw std::runtime_error("draws file " + path +
                             ": last column must be 'chain'");
  const std::size_t p = header.size() - 1;
  if (p == 0)
    throw std::runtime_error("draws file " + path + ": no coefficient columns");

  Draws draws;
  draws.names.reserve(p);
  for (std::size_t j = 0; j < p; ++j) draws.names.push_back(detail::trim(header[j]));

  std::vector<double> values;
  std::size_t rows = 0;
  long row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (detail::trim(line).empty()) continue;
    const std::vector<std::string> fields = detail::split_csv_line(line);
    if (fields.size() != p + 1)
      throw std::runtime_error("draws file " + path + ": row " +
                               std::to_string(row_no) + " has " +
                               std::to_string(fields.size()) +
                               " fields, expected " + std::to_string(p + 1));
    for (std::size_t j = 0; j < p; ++j) {
      double v = 0.0;
      if (!detail::parse_double(detail::trim(fields[j]), v))
        throw std::runtime_error("draws file " + path + ": row " +
                                 std::to_string(row_no) + ", column '" +
                                 header[j] + "': not a number: " + fields[j]);
      values.push_back(v);
    }
    double chain_val = 0.0;
    if (!detail::parse_double(detail::trim(fields[p]), chain_val))
      throw std::runtime_error("draws file " + path + ": row " +
                               std::to_string(row_no) +
                               ": chain id is not a number: " + fields[p]);
    const int chain = static_cast<int>(chain_val);
    if (chain < 0 || static_cast<double>(chain) != chain_val)
      throw std::runtime_error("draws file " + path + ": row " +
                               std::to_string(row_no) +
                               ": chain id must be a non-negative integer");
    draws.chain_ids.push_back(chain);
    ++rows;
  }
  if (rows == 0)
    throw std::runtime_error("draws file " + path + ": no draws");
  draws.samples.resize(static_cast<Eigen::Index>(rows),
                       static_cast<Eigen::Index>(p));
  for (std::size_t s = 0; s < rows; ++s)
    for (std::size_t j = 0; j < p; ++j)
      draws.samples(static_cast<Eigen::Index>(s),
                    static_cast<Eigen::Index>(j)) = values[s * p + j];
  return draws;
}

// ---------------------------------------------------------------------------
// JSON pieces: priors, standardization records, existence verdicts.
// ---------------------------------------------------------------------------

inline ordered_json prior_to_json(const PriorSpec& prior) {
  ordered_json j;
  if (const auto* t = std::get_if<IndependentT>(&prior)) {
    j["type"] = "independent_t";
    j["df"] = t->df;
    j["locations"] = std::vector<double>(t->locations.begin(), t->locations.end());
    j["scales"] = std::vector<double>(t->scales.begin(), t->scales.end());
  } else if (const auto* g = std::get_if<IndependentNormal>(&prior)) {
    j["type"] = "independent_normal";
    j["locations"] = std::vector<double>(g->locations.begin(), g->locations.end());
    j["scales"] = std::vector<double>(g->scales.begin(), g->scales.end());
  } else {
    const auto& m = std::get<MultivariateT>(prior);
    j["type"] = "multivariate_t";
    j["df"] = m.df;
    j["location"] = std::vector<double>(m.location.begin(), m.location.end());
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.scale_matrix.rows(); ++r) {
      ordered_json row = ordered_json::array();
      for (Eigen::Index c = 0; c < m.scale_matrix.cols(); ++c)
        row.push_back(m.scale_matrix(r, c));
      rows.push_back(std::move(row));
    }
    j["scale_matrix"] = std::move(rows);
  }
  return j;
}

inline PriorSpec prior_from_json(const ordered_json& j) {
  const std::string type = j.at("type").get<std::string>();
  const auto to_vector = [](const ordered_json& arr) {
    const std::vector<double> v = arr.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                             static_cast<Eigen::Index>(v.size()))
        .eval();
  };
  if (type == "independent_t") {
    IndependentT t;
    t.df = j.at("df").get<double>();
    t.locations = to_vector(j.at("locations"));
    t.scales = to_vector(j.at("scales"));
    return t;
  }
  if (type == "independent_normal") {
    IndependentNormal g;
    g.locations = to_vector(j.at("locations"));
    g.scales = to_vector(j.at("scales"));
    return g;
  }
  if (type == "multivariate_t") {
    MultivariateT m;
    m.df = j.at("df").get<double>();
    m.location = to_vector(j.at("location"));
    const auto& rows = j.at("scale_matrix");
    const Eigen::Index p = static_cast<Eigen::Index>(rows.size());
    m.scale_matrix.resize(p, p);
    for (Eigen::Index r = 0; r < p; ++r) {
      const auto& row = rows.at(static_cast<std::size_t>(r));
      if (static_cast<Eigen::Index>(row.size()) != p)
        throw std::runtime_error("prior scale_matrix is not square");
      for (Eigen::Index c = 0; c < p; ++c)
        m.scale_matrix(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    return m;
  }
  throw std::runtime_error("unknown prior type in sidecar: " + type);
}

inline ordered_json record_to_json(const StandardizationRecord& record) {
  ordered_json arr = ordered_json::array();
  for (const ColumnStandardization& c : record.columns) {
    ordered_json j;
    switch (c.action) {
      case ColumnStandardization::Action::None: j["action"] = "none"; break;
      case ColumnStandardization::Action::Center: j["action"] = "center"; break;
      case ColumnStandardization::Action::CenterScale:
        j["action"] = "center_scale";
        break;
    }
    j["shift"] = c.shift;
    j["divisor"] = c.divisor;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline StandardizationRecord record_from_json(const ordered_json& arr) {
  StandardizationRecord record;
  for (const auto& j : arr) {
    ColumnStandardization c;
    const std::string action = j.at("action").get<std::string>();
    if (action == "none") c.action = ColumnStandardization::Action::None;
    else if (action == "center") c.action = ColumnStandardization::Action::Center;
    else if (action == "center_scale")
      c.action = ColumnStandardization::Action::CenterScale;
    else
      throw std::runtime_error("unknown standardization action: " + action);
    c.shift = j.at("shift").get<double>();
    c.divisor = j.at("divisor").get<double>();
    record.columns.push_back(c);
  }
  return record;
}

inline ordered_json existence_to_json(
    const std::vector<std::string>& names,
    const std::vector<ExistenceVerdict>& verdicts) {
  ordered_json arr = ordered_json::array();
  for (std::size_t j = 0; j < verdicts.size(); ++j) {
    ordered_json e;
    e["coefficient"] = j < names.size() ? names[j] : "c" + std::to_string(j);
    e["verdict"] = existence_name(verdicts[j].verdict);
    e["basis"] = verdicts[j].basis;
    arr.push_back(std::move(e));
  }
  return arr;
}

inline std::vector<ExistenceVerdict> existence_from_json(const ordered_json& arr) {
  std::vector<ExistenceVerdict> verdicts;
  for (const auto& e : arr) {
    ExistenceVerdict v;
    const std::string verdict = e.at("verdict").get<std::string>();
    if (verdict == "exists") v.verdict = Existence::Exists;
    else if (verdict == "not-exists") v.verdict = Existence::NotExists;
    else if (verdict == "unknown") v.verdict = Existence::Unknown;
    else throw std::runtime_error("unknown existence verdict: " + verdict);
    v.basis = e.at("basis").get<std::string>();
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

// ---------------------------------------------------------------------------
// Run sidecar: JSON written next to the draws CSV carrying everything needed
// to diagnose or predict from the draws later.
// ---------------------------------------------------------------------------

struct RunSidecar {
  std::vector<std::string> names;
  Link link = Link::Logit;
  std::string sampler;  // "gibbs" or "metropolis"
  PriorSpec prior;
  GibbsConfig config;
  double wall_seconds = 0.0;
  std::optional<double> acceptance_rate;
  std::optional<StandardizationRecord> record;
  std::vector<ExistenceVerdict> existence;
};

inline ordered_json sidecar_to_json(const RunSidecar& sc) {
  ordered_json j;
  j["coefficients"] = sc.names;
  j["link"] = link_name(sc.link);
  j["sampler"] = sc.sampler;
  j["prior"] = prior_to_json(sc.prior);
  ordered_json cfg;
  cfg["iterations"] = sc.config.iterations;
  cfg["burnin"] = sc.config.burnin;
  cfg["thin"] = sc.config.thin;
  cfg["chains"] = sc.config.chains;
  cfg["seed"] = sc.config.seed;
  j["config"] = std::move(cfg);
  j["wall_seconds"] = sc.wall_seconds;
  j["acceptance_rate"] =
      sc.acceptance_rate ? ordered_json(*sc.acceptance_rate) : ordered_json();
  j["standardization"] =
      sc.record ? record_to_json(*sc.record) : ordered_json();
  j["existence"] = existence_to_json(sc.names, sc.existence);
  return j;
}

inline RunSidecar sidecar_from_json(const ordered_json& j) {
  RunSidecar sc;
  sc.names = j.at("coefficients").get<std::vector<std::string>>();
  sc.link = parse_link(j.at("link").get<std::string>());
  sc.sampler = j.at("sampler").get<std::string>();
  sc.prior = prior_from_json(j.at("prior"));
  const auto& cfg = j.at("config");
  sc.config.iterations = cfg.at("iterations").get<long>();
  sc.config.burnin = cfg.at("burnin").get<long>();
  sc.config.thin = cfg.at("thin").get<long>();
  sc.config.chains = cfg.at("chains").get<int>();
  sc.config.seed = cfg.at("seed").get<std::uint64_t>();
  sc.wall_seconds = j.at("wall_seconds").get<double>();
  if (!j.at("acceptance_rate").is_null())
    sc.acceptance_rate = j.at("acceptance_rate").get<double>();
  if (!j.at("standardization").is_null())
    sc.record = record_from_json(j.at("standardization"));
  sc.existence = existence_from_json(j.at("existence"));
  return sc;
}

inline void write_json_file(const std::string& path, const ordered_json& j) {
  std::ofstream out = detail::open_for_write(path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline ordered_json read_json_file(const std::string& path) {
  std::ifstream in = detail::open_for_read(path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("cannot parse JSON in " + path + ": " + e.what());
  }
  return j;
}

// The metadata sidecar lives next to the draws CSV with a .json extension.
inline std::string sidecar_path_for(const std::string& draws_path) {
  const std::size_t dot = draws_path.find_last_of('.');
  const std::size_t slash = draws_path.find_last_of("/\\");
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    return draws_path.substr(0, dot) + ".json";
  return draws_path + ".json";
}

// ---------------------------------------------------------------------------
// Run manifest: what was run, with what inputs and outputs.
// ---------------------------------------------------------------------------

struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
  ordered_json config = ordered_json::object();  // flag echo
};

inline void write_manifest(const std::string& path, const RunManifest& m) {
  ordered_json j;
  j["command"] = m.command;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["seed"] = m.seed;
  j["config"] = m.config;
  ordered_json versions;
  versions["sepbayes"] = "0.1.0";
  versions["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION);
  j["versions"] = std::move(versions);
  j["timestamp"] = detail::utc_timestamp();
  write_json_file(path, j);
}

}  // namespace sepbayes
