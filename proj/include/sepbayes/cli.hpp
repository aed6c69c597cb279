#pragma once

// Command-line surface: check, fit, diagnose, predict, simulate.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include <sepbayes/dataset.hpp>
#include <sepbayes/diagnostics.hpp>
#include <sepbayes/io.hpp>
#include <sepbayes/link.hpp>
#include <sepbayes/predict.hpp>
#include <sepbayes/priors.hpp>
#include <sepbayes/samplers.hpp>
#include <sepbayes/separation.hpp>
#include <sepbayes/simulate.hpp>

namespace sepbayes::cli {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Shared flag bundles.
// ---------------------------------------------------------------------------

struct PriorFlags {
  std::string prior = "cauchy";          // cauchy | t | normal | mvt
  std::optional<double> df;              // defaults: t -> 7, mvt -> 1
  double scale = 2.5;
  double scale_intercept = 10.0;
  double location = 0.0;
  std::string sigma_matrix = "identity";  // identity | zellner-siow (mvt only)
};

struct DataFlags {
  std::string path;
  std::string response;  // empty = first column
  bool no_standardize = false;
};

struct SamplerFlags {
  std::string sampler = "gibbs";  // gibbs | metropolis
  long iters = 11000;
  long burnin = 1000;
  long thin = 1;
  int chains = 1;
  std::uint64_t seed = 1;
  std::optional<double> step_scale;  // metropolis initial step size
};

// Builds the prior implied by the flags for a p-coefficient design.  The
// dataset supplies the intercept position and, for the Zellner-Siow scale
// matrix, the design itself.
inline PriorSpec build_prior(const PriorFlags& f, const Dataset& d) {
  const Eigen::Index p = d.p();
  Eigen::VectorXd locations = Eigen::VectorXd::Constant(p, f.location);
  Eigen::VectorXd scales = Eigen::VectorXd::Constant(p, f.scale);
  if (d.intercept_index) scales(*d.intercept_index) = f.scale_intercept;

  if (f.prior != "mvt" && f.sigma_matrix != "identity")
    throw std::invalid_argument(
        "--sigma-matrix applies to the mvt prior only");

  if (f.prior == "cauchy") {
    if (f.df && *f.df != 1.0)
      throw std::invalid_argument(
          "--df conflicts with --prior cauchy (Cauchy is t with df 1); "
          "use --prior t to choose a df");
    return IndependentT{1.0, std::move(locations), std::move(scales)};
  }
  if (f.prior == "t")
    return IndependentT{f.df.value_or(7.0), std::move(locations),
                        std::move(scales)};
  if (f.prior == "normal") {
    if (f.df)
      throw std::invalid_argument("--df does not apply to --prior normal");
    return IndependentNormal{std::move(locations), std::move(scales)};
  }
  if (f.prior == "mvt") {
    MultivariateT m;
    m.df = f.df.value_or(1.0);
    m.location = std::move(locations);
    if (f.sigma_matrix == "identity") {
      m.scale_matrix = scales.array().square().matrix().asDiagonal();
    } else if (f.sigma_matrix == "zellner-siow") {
      const Eigen::MatrixXd xtx = d.X.transpose() * d.X;
      const Eigen::LLT<Eigen::MatrixXd> llt(xtx);
      if (llt.info() != Eigen::Success)
        throw std::invalid_argument(
            "--sigma-matrix zellner-siow requires a full-rank design "
            "(X'X is singular)");
      Eigen::MatrixXd inv =
          llt.solve(Eigen::MatrixXd::Identity(p, p)) * static_cast<double>(d.n());
      m.scale_matrix = 0.5 * (inv + inv.transpose());
    } else {
      throw std::invalid_argument("unknown --sigma-matrix: " + f.sigma_matrix);
    }
    return m;
  }
  throw std::invalid_argument("unknown --prior: " + f.prior);
}

// Loads a training CSV, prepends the intercept, and standardizes unless
// disabled.
inline std::pair<Dataset, std::optional<StandardizationRecord>> load_training(
    const DataFlags& f) {
  Dataset d = load_csv(f.path, f.response);
  d = add_intercept(d);
  if (f.no_standardize) return {std::move(d), std::nullopt};
  auto [sd, record] = standardize(d);
  return {std::move(sd), std::move(record)};
}

inline void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory '" + dir +
                             "': " + ec.message());
}

inline std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

inline ordered_json flags_json(const DataFlags& data, const PriorFlags& prior,
                               Link link) {
  ordered_json j;
  j["data"] = data.path;
  j["response"] = data.response;
  j["standardize"] = !data.no_standardize;
  j["link"] = link_name(link);
  j["prior"] = prior.prior;
  j["df"] = prior.df ? ordered_json(*prior.df) : ordered_json();
  j["scale"] = prior.scale;
  j["scale_intercept"] = prior.scale_intercept;
  j["location"] = prior.location;
  j["sigma_matrix"] = prior.sigma_matrix;
  return j;
}

// ---------------------------------------------------------------------------
// check: separation + solitary + existence report, exit code signalling.
// ---------------------------------------------------------------------------

struct CheckOptions {
  DataFlags data;
  PriorFlags prior;
  Link link = Link::Logit;
  std::string out_dir;  // empty = stdout only
};

inline int cmd_check(const CheckOptions& opt) {
  auto [d, record] = load_training(opt.data);
  (void)record;
  const PriorSpec prior = build_prior(opt.prior, d);
  const SeparationReport report = existence_report(d, prior, opt.link);

  const ordered_json j = to_json(report);
  std::cout << j.dump(2) << '\n';
  if (!opt.out_dir.empty()) {
    ensure_out_dir(opt.out_dir);
    write_json_file(join_path(opt.out_dir, "report.json"), j);
  }

  bool any_not_exists = false, any_unknown = false;
  for (const ExistenceVerdict& v : report.existence) {
    any_not_exists = any_not_exists || v.verdict == Existence::NotExists;
    any_unknown = any_unknown || v.verdict == Existence::Unknown;
  }
  if (any_not_exists) return 3;
  if (any_unknown) return 4;
  if (report.kind != SeparationKind::None) return 2;
  return 0;
}

// ---------------------------------------------------------------------------
// fit: run the requested sampler and write draws + sidecar + manifest.
// ---------------------------------------------------------------------------

struct FitOptions {
  DataFlags data;
  PriorFlags prior;
  Link link = Link::Logit;
  SamplerFlags sampler;
  bool force = false;
  std::string out_dir = ".";
};

inline int cmd_fit(const FitOptions& opt) {
  auto [d, record] = load_training(opt.data);
  const PriorSpec prior = build_prior(opt.prior, d);
  const SeparationReport report = existence_report(d, prior, opt.link);

  bool any_not_exists = false;
  for (const ExistenceVerdict& v : report.existence)
    any_not_exists = any_not_exists || v.verdict == Existence::NotExists;
  if (any_not_exists && !opt.force) {
    std::cerr << "refusing to fit: separation detected ("
              << separation_kind_name(report.kind)
              << ") and some posterior means do not exist:\n";
    for (std::size_t k = 0; k < report.existence.size(); ++k) {
      const ExistenceVerdict& v = report.existence[k];
      if (v.verdict != Existence::NotExists) continue;
      std::cerr << "  " << report.names[k] << ": " << existence_name(v.verdict)
                << " (" << v.basis << ")\n";
    }
    std::cerr << "rerun with --force to sample anyway\n";
    return 3;
  }

  GibbsConfig cfg;
  cfg.iterations = opt.sampler.iters;
  cfg.burnin = opt.sampler.burnin;
  cfg.thin = opt.sampler.thin;
  cfg.chains = opt.sampler.chains;
  cfg.seed = opt.sampler.seed;

  Draws draws;
  if (opt.sampler.sampler == "gibbs") {
    if (opt.link != Link::Logit) {
      std::cerr << "error: the Gibbs sampler supports the logit link only; "
                   "use --sampler metropolis for probit\n";
      return 1;
    }
    if (const auto* t = std::get_if<IndependentT>(&prior))
      draws = gibbs_independent_t(d, *t, cfg);
    else if (const auto* g = std::get_if<IndependentNormal>(&prior))
      draws = gibbs_normal(d, *g, cfg);
    else
      draws = gibbs_multivariate_t(d, std::get<MultivariateT>(prior), cfg);
  } else if (opt.sampler.sampler == "metropolis") {
    draws = rw_metropolis(d, prior, opt.link, cfg, opt.sampler.step_scale);
  } else {
    throw std::invalid_argument("unknown --sampler: " + opt.sampler.sampler);
  }
  draws.names = d.names;

  ensure_out_dir(opt.out_dir);
  const std::string draws_path = join_path(opt.out_dir, "draws.csv");
  const std::string sidecar_path = sidecar_path_for(draws_path);
  const std::string manifest_path = join_path(opt.out_dir, "manifest.json");

  write_draws_csv(draws_path, draws);

  RunSidecar sc;
  sc.names = d.names;
  sc.link = opt.link;
  sc.sampler = opt.sampler.sampler;
  sc.prior = prior;
  sc.config = cfg;
  sc.wall_seconds = draws.wall_seconds;
  sc.acceptance_rate = draws.acceptance_rate;
  sc.record = record;
  sc.existence = report.existence;
  write_json_file(sidecar_path, sidecar_to_json(sc));

  RunManifest manifest;
  manifest.command = "fit";
  manifest.inputs = {opt.data.path};
  manifest.outputs = {draws_path, sidecar_path, manifest_path};
  manifest.seed = cfg.seed;
  manifest.config = flags_json(opt.data, opt.prior, opt.link);
  manifest.config["sampler"] = opt.sampler.sampler;
  manifest.config["iters"] = opt.sampler.iters;
  manifest.config["burnin"] = opt.sampler.burnin;
  manifest.config["thin"] = opt.sampler.thin;
  manifest.config["chains"] = opt.sampler.chains;
  manifest.config["step_scale"] = opt.sampler.step_scale
                                      ? ordered_json(*opt.sampler.step_scale)
                                      : ordered_json();
  manifest.config["force"] = opt.force;
  write_manifest(manifest_path, manifest);

  std::cout << "wrote " << draws_path << " (" << draws.S() << " draws, "
            << draws.p() << " coefficients, " << cfg.chains << " chain"
            << (cfg.chains > 1 ? "s" : "") << ", "
            << detail::format_double(draws.wall_seconds) << " s)\n";
  if (draws.acceptance_rate)
    std::cout << "acceptance rate: "
              << detail::format_double(*draws.acceptance_rate) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// diagnose: summaries plus ACF and running-mean series.
// ---------------------------------------------------------------------------

struct DiagnoseOptions {
  std::string draws_path;
  std::string out_dir = ".";
  int max_lag = 100;
};

inline int cmd_diagnose(const DiagnoseOptions& opt) {
  Draws draws = read_draws_csv(opt.draws_path);
  const RunSidecar sc =
      sidecar_from_json(read_json_file(sidecar_path_for(opt.draws_path)));
  if (sc.names != draws.names)
    throw std::runtime_error(
        "sidecar coefficient names do not match the draws file");
  draws.config = sc.config;

  const ChainSummary summary = summarize(draws, sc.existence, opt.max_lag);

  ensure_out_dir(opt.out_dir);
  write_json_file(join_path(opt.out_dir, "summary.json"), to_json(summary));

  // acf.csv: chain-averaged autocorrelation, one column per coefficient.
  {
    std::ofstream out =
        detail::open_for_write(join_path(opt.out_dir, "acf.csv"));
    out << "lag";
    for (const auto& c : summary.coefficients) out << ',' << c.name;
    out << '\n';
    const std::size_t L =
        summary.coefficients.empty() ? 0 : summary.coefficients[0].acf.size();
    for (std::size_t l = 0; l < L; ++l) {
      out << l;
      for (const auto& c : summary.coefficients)
        out << ',' << detail::format_double(c.acf[l]);
      out << '\n';
    }
  }

  // running_mean.csv: one column per coefficient per chain.
  {
    const auto& ids = draws.chain_ids;
    int nchains = 0;
    for (int id : ids) nchains = std::max(nchains, id + 1);
    std::vector<std::vector<Eigen::Index>> rows_of(
        static_cast<std::size_t>(nchains));
    for (std::size_t s = 0; s < ids.size(); ++s)
      rows_of[static_cast<std::size_t>(ids[s])].push_back(
          static_cast<Eigen::Index>(s));

    std::vector<Eigen::VectorXd> columns;
    std::vector<std::string> headers;
    for (Eigen::Index j = 0; j < draws.p(); ++j)
      for (int c = 0; c < nchains; ++c) {
        const auto& rows = rows_of[static_cast<std::size_t>(c)];
        Eigen::VectorXd series(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t s = 0; s < rows.size(); ++s)
          series(static_cast<Eigen::Index>(s)) = draws.samples(rows[s], j);
        columns.push_back(running_mean(series));
        headers.push_back(draws.names[static_cast<std::size_t>(j)] + "_chain" +
                          std::to_string(c));
      }

    Eigen::Index max_len = 0;
    for (const auto& col : columns) max_len = std::max(max_len, col.size());
    std::ofstream out =
        detail::open_for_write(join_path(opt.out_dir, "running_mean.csv"));
    out << "iter";
    for (const auto& h : headers) out << ',' << h;
    out << '\n';
    for (Eigen::Index s = 0; s < max_len; ++s) {
      out << (s + 1);
      for (const auto& col : columns) {
        out << ',';
        if (s < col.size()) out << detail::format_double(col(s));
      }
      out << '\n';
    }
  }

  for (const auto& c : summary.coefficients) {
    std::cout << c.name << ": mean " << detail::format_double(c.mean)
              << ", sd " << detail::format_double(c.sd) << ", ESS "
              << detail::format_double(c.ess_value);
    if (!c.annotation.empty()) std::cout << "  [" << c.annotation << ']';
    std::cout << '\n';
  }
  std::cout << "wrote " << join_path(opt.out_dir, "summary.json") << ", "
            << join_path(opt.out_dir, "acf.csv") << ", "
            << join_path(opt.out_dir, "running_mean.csv") << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// predict: Monte Carlo (and optionally MAP) out-of-sample predictions.
// ---------------------------------------------------------------------------

struct PredictOptions {
  std::string draws_path;
  std::string test_path;
  std::string response;
  std::string train_path;  // required for --point-estimate map
  std::string point_estimate = "mc";  // mc | map
  double threshold = 0.5;
  std::string out_dir = ".";
};

inline int cmd_predict(const PredictOptions& opt) {
  const Draws draws = read_draws_csv(opt.draws_path);
  const RunSidecar sc =
      sidecar_from_json(read_json_file(sidecar_path_for(opt.draws_path)));
  if (sc.names != draws.names)
    throw std::runtime_error(
        "sidecar coefficient names do not match the draws file");

  Dataset test = load_csv(opt.test_path, opt.response);
  test = add_intercept(test);
  if (test.p() != static_cast<Eigen::Index>(sc.names.size()))
    throw std::runtime_error(
        "test data have " + std::to_string(test.p()) +
        " coefficient columns after adding the intercept but the draws have " +
        std::to_string(sc.names.size()) +
        "; columns must match the training design");
  if (sc.record) test.X = apply_record(*sc.record, test.X);

  const Eigen::VectorXd probs_mc = predict_mc(draws, test.X, sc.link);
  const double mis_mc = misclassification(probs_mc, test.y, opt.threshold);
  const double brier_mc = brier(probs_mc, test.y);

  std::optional<Eigen::VectorXd> probs_map;
  std::optional<MapResult> map;
  if (opt.point_estimate == "map") {
    if (opt.train_path.empty())
      throw std::runtime_error(
          "--point-estimate map needs --train (the training CSV) to locate "
          "the posterior mode");
    Dataset train = load_csv(opt.train_path, opt.response);
    train = add_intercept(train);
    if (sc.record) train.X = apply_record(*sc.record, train.X);
    if (train.p() != static_cast<Eigen::Index>(sc.names.size()))
      throw std::runtime_error("training data do not match the draws");
    map = map_estimate(train, sc.prior, sc.link);
    probs_map = predict_point(map->beta, test.X, sc.link);
  } else if (opt.point_estimate != "mc") {
    throw std::invalid_argument("unknown --point-estimate: " +
                                opt.point_estimate);
  }

  ensure_out_dir(opt.out_dir);
  {
    std::ofstream out =
        detail::open_for_write(join_path(opt.out_dir, "probabilities.csv"));
    out << "pi_mc";
    if (probs_map) out << ",pi_map";
    out << ",y\n";
    for (Eigen::Index i = 0; i < probs_mc.size(); ++i) {
      out << detail::format_double(probs_mc(i));
      if (probs_map) out << ',' << detail::format_double((*probs_map)(i));
      out << ',' << test.y(i) << '\n';
    }
  }

  ordered_json metrics;
  metrics["threshold"] = opt.threshold;
  ordered_json mc;
  mc["misclassification"] = mis_mc;
  mc["brier"] = brier_mc;
  metrics["mc"] = std::move(mc);
  if (probs_map) {
    ordered_json mj;
    mj["misclassification"] =
        misclassification(*probs_map, test.y, opt.threshold);
    mj["brier"] = brier(*probs_map, test.y);
    mj["converged"] = map->converged;
    mj["iterations"] = map->iterations;
    metrics["map"] = std::move(mj);
  }
  write_json_file(join_path(opt.out_dir, "metrics.json"), metrics);

  std::cout << "mc: misclassification " << detail::format_double(mis_mc)
            << ", brier " << detail::format_double(brier_mc) << '\n';
  if (probs_map)
    std::cout << "map: misclassification "
              << detail::format_double(metrics["map"]["misclassification"]
                                           .get<double>())
              << ", brier "
              << detail::format_double(metrics["map"]["brier"].get<double>())
              << '\n';
  std::cout << "wrote " << join_path(opt.out_dir, "probabilities.csv") << ", "
            << join_path(opt.out_dir, "metrics.json") << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// simulate: regenerate the two benchmark separation scenarios.
// ---------------------------------------------------------------------------

struct SimulateOptions {
  std::string scenario = "solitary";
  int n = 30;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

inline int cmd_simulate(const SimulateOptions& opt) {
  const Dataset d = simulate_dataset(parse_scenario(opt.scenario), opt.n,
                                     opt.seed);
  ensure_out_dir(opt.out_dir);
  const std::string path = join_path(opt.out_dir, "simulated.csv");
  std::ofstream out = detail::open_for_write(path);
  out << "y," << d.names[0] << '\n';
  for (Eigen::Index i = 0; i < d.n(); ++i)
    out << d.y(i) << ',' << detail::format_double(d.X(i, 0)) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
  std::cout << "wrote " << path << " (" << d.n() << " rows, scenario "
            << opt.scenario << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// Argument parsing.
// ---------------------------------------------------------------------------

namespace detail_cli {

inline void add_data_flags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("data", f.path, "training data CSV")->required();
  cmd->add_option("--response", f.response,
                  "response column name (default: first column)");
  cmd->add_flag("--no-standardize", f.no_standardize,
                "skip the default covariate standardization");
}

inline void add_prior_flags(CLI::App* cmd, PriorFlags& f, Link& link) {
  cmd->add_option("--link", link,
                  "link function")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Link>{{"logit", Link::Logit},
                                      {"probit", Link::Probit}}))
      ->default_str("logit");
  cmd->add_option("--prior", f.prior, "prior family")
      ->check(CLI::IsMember({"cauchy", "t", "normal", "mvt"}))
      ->capture_default_str();
  cmd->add_option("--df", f.df,
                  "degrees of freedom (default: 7 for t, 1 for mvt)");
  cmd->add_option("--scale", f.scale, "prior scale for non-intercept terms")
      ->capture_default_str();
  cmd->add_option("--scale-intercept", f.scale_intercept,
                  "prior scale for the intercept")
      ->capture_default_str();
  cmd->add_option("--location", f.location, "prior location for every term")
      ->capture_default_str();
  cmd->add_option("--sigma-matrix", f.sigma_matrix,
                  "mvt scale matrix: identity or zellner-siow")
      ->check(CLI::IsMember({"identity", "zellner-siow"}))
      ->capture_default_str();
}

inline void add_sampler_flags(CLI::App* cmd, SamplerFlags& f) {
  cmd->add_option("--sampler", f.sampler, "posterior sampler")
      ->check(CLI::IsMember({"gibbs", "metropolis"}))
      ->capture_default_str();
  cmd->add_option("--iters", f.iters, "total sweeps including burn-in")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--burnin", f.burnin, "burn-in sweeps to discard")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--thin", f.thin, "keep every thin-th retained sweep")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--chains", f.chains, "independent chains")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "random seed")->capture_default_str();
  cmd->add_option("--step-scale", f.step_scale,
                  "metropolis initial proposal scale (default 2.38/sqrt(p))");
}

}  // namespace detail_cli

inline int run(int argc, const char* const* argv) {
  CLI::App app{
      "Separation diagnostics and Bayesian binary regression under "
      "heavy-tailed priors"};
  app.require_subcommand(1);

  CheckOptions check_opt;
  CLI::App* check = app.add_subcommand(
      "check",
      "diagnose separation, solitary separators, and posterior-mean "
      "existence");
  detail_cli::add_data_flags(check, check_opt.data);
  detail_cli::add_prior_flags(check, check_opt.prior, check_opt.link);
  check->add_option("--out", check_opt.out_dir,
                    "also write report.json to this directory");

  FitOptions fit_opt;
  CLI::App* fit =
      app.add_subcommand("fit", "sample the posterior and write draws");
  detail_cli::add_data_flags(fit, fit_opt.data);
  detail_cli::add_prior_flags(fit, fit_opt.prior, fit_opt.link);
  detail_cli::add_sampler_flags(fit, fit_opt.sampler);
  fit->add_flag("--force", fit_opt.force,
                "fit even when some posterior means do not exist");
  fit->add_option("--out", fit_opt.out_dir, "output directory")
      ->capture_default_str();

  DiagnoseOptions diag_opt;
  CLI::App* diag = app.add_subcommand(
      "diagnose", "summaries, ESS, autocorrelation, running means");
  diag->add_option("draws", diag_opt.draws_path, "draws CSV from fit")
      ->required();
  diag->add_option("--max-lag", diag_opt.max_lag, "largest ACF lag")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  diag->add_option("--out", diag_opt.out_dir, "output directory")
      ->capture_default_str();

  PredictOptions pred_opt;
  CLI::App* pred = app.add_subcommand(
      "predict", "out-of-sample success probabilities and error metrics");
  pred->add_option("draws", pred_opt.draws_path, "draws CSV from fit")
      ->required();
  pred->add_option("test", pred_opt.test_path, "test data CSV")->required();
  pred->add_option("--response", pred_opt.response,
                   "response column name (default: first column)");
  pred->add_option("--threshold", pred_opt.threshold,
                   "classification threshold")
      ->capture_default_str();
  pred->add_option("--point-estimate", pred_opt.point_estimate,
                   "also report plug-in predictions: mc or map")
      ->check(CLI::IsMember({"mc", "map"}))
      ->capture_default_str();
  pred->add_option("--train", pred_opt.train_path,
                   "training CSV (required for --point-estimate map)");
  pred->add_option("--out", pred_opt.out_dir, "output directory")
      ->capture_default_str();

  SimulateOptions sim_opt;
  CLI::App* sim = app.add_subcommand(
      "simulate", "regenerate the benchmark separation scenarios");
  sim->add_option("--scenario", sim_opt.scenario,
                  "solitary or no-solitary")
      ->check(CLI::IsMember({"solitary", "no-solitary"}))
      ->capture_default_str();
  sim->add_option("--n", sim_opt.n, "number of observations (>= 4)")
      ->capture_default_str();
  sim->add_option("--seed", sim_opt.seed, "random seed")
      ->capture_default_str();
  sim->add_option("--out", sim_opt.out_dir, "output directory")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (check->parsed()) return cmd_check(check_opt);
    if (fit->parsed()) return cmd_fit(fit_opt);
    if (diag->parsed()) return cmd_diagnose(diag_opt);
    if (pred->parsed()) return cmd_predict(pred_opt);
    if (sim->parsed()) return cmd_simulate(sim_opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace sepbayes::cli
