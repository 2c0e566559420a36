// ppdepth command line tool. Talks to the shared library exclusively
// through the C interface; all CSV assembly happens here.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppdepth/ppdepth.h"

namespace {

struct CliError {
  int exit_code;
  std::string message;
};

void check(ppd_status status) {
  if (status == PPD_OK) return;
  throw CliError{status == PPD_ERROR_INTERNAL ? 1 : 2, ppd_last_error()};
}

// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::uint64_t effective_seed(std::uint64_t cli_seed) {
  const char* env = std::getenv("PPDEPTH_SEED");
  if (env == nullptr || *env == '\0') return cli_seed;
  std::uint64_t value = 0;
  const char* end = env + std::string(env).size();
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc() || ptr != end) {
    throw CliError{2, "PPDEPTH_SEED is set but is not a nonnegative integer: " +
                          std::string(env)};
  }
  return value;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content) || !out.flush()) {
    throw CliError{2, "cannot write " + path};
  }
}

using dataset_ptr = std::unique_ptr<ppd_dataset, decltype(&ppd_dataset_free)>;
using intensity_ptr =
    std::unique_ptr<ppd_intensity, decltype(&ppd_intensity_free)>;
using model_ptr = std::unique_ptr<ppd_model, decltype(&ppd_model_free)>;
using classifier_ptr =
    std::unique_ptr<ppd_classifier, decltype(&ppd_classifier_free)>;
using likelihood_ptr =
    std::unique_ptr<ppd_likelihood, decltype(&ppd_likelihood_free)>;

dataset_ptr read_dataset(const std::string& path, double t1, double t2) {
  ppd_dataset* d = nullptr;
  check(ppd_dataset_read_file(path.c_str(), t1, t2, &d));
  return dataset_ptr(d, ppd_dataset_free);
}

model_ptr read_model(const std::string& path) {
  ppd_model* m = nullptr;
  check(ppd_model_read_file(path.c_str(), &m));
  return model_ptr(m, ppd_model_free);
}

struct ScoreList {
  ppd_score* data = nullptr;
  size_t len = 0;
  ~ScoreList() { ppd_scores_free(data); }
};

struct GofList {
  ppd_gof_row* data = nullptr;
  size_t len = 0;
  ~GofList() { ppd_gof_rows_free(data); }
};

void warn_missing_rows(const ppd_score* scores, size_t len) {
  size_t missing = 0;
  for (size_t i = 0; i < len; ++i) missing += scores[i].missing_row ? 1 : 0;
  if (missing > 0) {
    std::cerr << "warning: " << missing
              << " realization(s) have a weighted cardinality with no row in "
                 "the conditional table; their depth is 0\n";
  }
}

/* ------------------------------------------------------------------ */

struct SimulateHppArgs {
  double rate = 0.0, t1 = 0.0, t2 = 0.0;
  size_t n = 0;
  std::uint64_t seed = 1;
  std::string out;
};

void run_simulate_hpp(const SimulateHppArgs& a) {
  ppd_dataset* d = nullptr;
  check(ppd_simulate_hpp(a.rate, a.t1, a.t2, a.n, effective_seed(a.seed), &d));
  dataset_ptr data(d, ppd_dataset_free);
  if (a.out.empty()) {
    char* text = nullptr;
    check(ppd_dataset_render(data.get(), &text));
    std::unique_ptr<char[], decltype(&ppd_string_free)> guard(text,
                                                              ppd_string_free);
    std::cout << text;
  } else {
    check(ppd_dataset_write_file(data.get(), a.out.c_str()));
  }
}

struct SimulateIppArgs {
  std::string intensity;
  size_t n = 0;
  std::uint64_t seed = 1;
  std::string out;
};

void run_simulate_ipp(const SimulateIppArgs& a) {
  ppd_intensity* m = nullptr;
  check(ppd_intensity_read_file(a.intensity.c_str(), &m));
  intensity_ptr intensity(m, ppd_intensity_free);
  ppd_dataset* d = nullptr;
  check(ppd_simulate_ipp(intensity.get(), a.n, effective_seed(a.seed), &d));
  dataset_ptr data(d, ppd_dataset_free);
  if (a.out.empty()) {
    char* text = nullptr;
    check(ppd_dataset_render(data.get(), &text));
    std::unique_ptr<char[], decltype(&ppd_string_free)> guard(text,
                                                              ppd_string_free);
    std::cout << text;
  } else {
    check(ppd_dataset_write_file(data.get(), a.out.c_str()));
  }
}

struct FitArgs {
  std::string data, kind, card = "empirical", out;
  double t1 = 0.0, t2 = 0.0, r = 1.0, bandwidth = 0.0;
  long long cap = -1;
  int repetitions = 10, components = 0;
  size_t bins = 0;
  std::uint64_t seed = 1;
};

void run_fit(const FitArgs& a) {
  dataset_ptr data = read_dataset(a.data, a.t1, a.t2);
  ppd_fit_options opts;
  ppd_fit_options_init(&opts);
  opts.kind = a.kind.c_str();
  opts.cardinality = a.card.c_str();
  opts.r = a.r;
  opts.cap = a.cap;
  opts.repetitions = a.repetitions;
  opts.bins = a.bins;
  opts.bandwidth = a.bandwidth;
  opts.mixture_components = a.components;
  opts.seed = effective_seed(a.seed);
  ppd_model* m = nullptr;
  check(ppd_model_fit(data.get(), &opts, &m));
  model_ptr model(m, ppd_model_free);
  check(ppd_model_write_file(model.get(), a.out.c_str()));
}

struct DepthArgs {
  std::string model, data, out;
};

void run_depth(const DepthArgs& a) {
  model_ptr model = read_model(a.model);
  double t1 = 0.0, t2 = 0.0;
  check(ppd_model_domain(model.get(), &t1, &t2));
  dataset_ptr data = read_dataset(a.data, t1, t2);
  ScoreList scores;
  check(ppd_model_score(model.get(), data.get(), &scores.data, &scores.len));
  warn_missing_rows(scores.data, scores.len);
  std::string csv = "index,cardinality,weight,conditional_depth,depth\n";
  for (size_t i = 0; i < scores.len; ++i) {
    const ppd_score& s = scores.data[i];
    csv += std::to_string(s.index) + ',' + std::to_string(s.cardinality) +
           ',' + fmt(s.weight) + ',' + fmt(s.conditional) + ',' +
           fmt(s.depth) + '\n';
  }
  write_output(a.out, csv);
}

struct RankArgs {
  std::string model, data;
  long long top = -1;
};

void run_rank(const RankArgs& a) {
  model_ptr model = read_model(a.model);
  double t1 = 0.0, t2 = 0.0;
  check(ppd_model_domain(model.get(), &t1, &t2));
  dataset_ptr data = read_dataset(a.data, t1, t2);
  ScoreList scores;
  check(ppd_model_rank(model.get(), data.get(), &scores.data, &scores.len));
  warn_missing_rows(scores.data, scores.len);
  size_t limit = scores.len;
  if (a.top >= 0 && static_cast<size_t>(a.top) < limit) {
    limit = static_cast<size_t>(a.top);
  }
  std::string csv = "rank,index,cardinality,weight,conditional_depth,depth\n";
  for (size_t i = 0; i < limit; ++i) {
    const ppd_score& s = scores.data[i];
    csv += std::to_string(i + 1) + ',' + std::to_string(s.index) + ',' +
           std::to_string(s.cardinality) + ',' + fmt(s.weight) + ',' +
           fmt(s.conditional) + ',' + fmt(s.depth) + '\n';
  }
  write_output("", csv);
}

struct GofArgs {
  std::string model, data, out;
};

void run_gof(const GofArgs& a) {
  model_ptr model = read_model(a.model);
  double t1 = 0.0, t2 = 0.0;
  check(ppd_model_domain(model.get(), &t1, &t2));
  dataset_ptr data = read_dataset(a.data, t1, t2);
  GofList rows;
  check(ppd_model_gof(model.get(), data.get(), &rows.data, &rows.len));
  std::string csv =
      "index,cardinality,weight,conditional_depth,depth,ks_stat,ks_p\n";
  for (size_t i = 0; i < rows.len; ++i) {
    const ppd_gof_row& row = rows.data[i];
    const ppd_score& s = row.score;
    csv += std::to_string(s.index) + ',' + std::to_string(s.cardinality) +
           ',' + fmt(s.weight) + ',' + fmt(s.conditional) + ',' +
           fmt(s.depth) + ',';
    if (row.has_ks) {
      csv += fmt(row.ks_stat) + ',' + fmt(row.ks_p) + '\n';
    } else {
      csv += "nan,nan\n";
    }
  }
  write_output(a.out, csv);
}

struct ClassifyArgs {
  std::string train, test, kind, baseline, out;
  double t1 = 0.0, t2 = 0.0, r = 1.0, bandwidth = 0.0;
  long long cap = -1;
  int repetitions = 10, components = 0;
  size_t bins = 0;
  std::uint64_t seed = 1;
  bool force = false;
};

struct ClassAccuracy {
  size_t total = 0;
  size_t correct = 0;
  size_t baseline_correct = 0;
};

void run_classify(const ClassifyArgs& a) {
  dataset_ptr train = read_dataset(a.train, a.t1, a.t2);
  dataset_ptr test = read_dataset(a.test, a.t1, a.t2);

  ppd_fit_options opts;
  ppd_fit_options_init(&opts);
  opts.kind = a.kind.c_str();
  opts.r = a.r;
  opts.cap = a.cap;
  opts.repetitions = a.repetitions;
  opts.bins = a.bins;
  opts.bandwidth = a.bandwidth;
  opts.mixture_components = a.components;
  opts.seed = effective_seed(a.seed);

  ppd_classifier* c = nullptr;
  check(ppd_classifier_train(train.get(), &opts, &c));
  classifier_ptr classifier(c, ppd_classifier_free);

  classifier_ptr baseline_depth(nullptr, ppd_classifier_free);
  likelihood_ptr baseline_lik(nullptr, ppd_likelihood_free);
  if (a.baseline == "likelihood") {
    ppd_likelihood* l = nullptr;
    check(ppd_likelihood_train(train.get(), a.bins, a.bandwidth, &l));
    baseline_lik.reset(l);
  } else if (a.baseline == "mahalanobis") {
    ppd_fit_options bopts = opts;
    bopts.kind = "mahalanobis";
    ppd_classifier* b = nullptr;
    check(ppd_classifier_train(train.get(), &bopts, &b));
    baseline_depth.reset(b);
  }

  int labeled = 0;
  check(ppd_dataset_labeled(test.get(), &labeled));
  size_t n = 0;
  check(ppd_dataset_size(test.get(), &n));

  std::string csv = "index,true_label,predicted";
  if (!a.baseline.empty()) csv += ",baseline";
  csv += '\n';

  std::map<std::string, ClassAccuracy> table;
  size_t correct = 0, baseline_correct = 0;
  for (size_t i = 0; i < n; ++i) {
    const double* events = nullptr;
    size_t len = 0;
    check(ppd_dataset_events(test.get(), i, &events, &len));
    const char* predicted = nullptr;
    check(ppd_classifier_classify(classifier.get(), events, len,
                                  a.force ? 1 : 0, &predicted, nullptr));
    const char* base = nullptr;
    if (baseline_lik) {
      check(ppd_likelihood_classify(baseline_lik.get(), events, len, &base,
                                    nullptr));
    } else if (baseline_depth) {
      check(ppd_classifier_classify(baseline_depth.get(), events, len,
                                    a.force ? 1 : 0, &base, nullptr));
    }

    std::string truth;
    if (labeled) {
      const char* t = nullptr;
      check(ppd_dataset_label(test.get(), i, &t));
      truth = t ? t : "";
      ClassAccuracy& acc = table[truth];
      acc.total += 1;
      if (truth == predicted) {
        acc.correct += 1;
        correct += 1;
      }
      if (base && truth == base) {
        acc.baseline_correct += 1;
        baseline_correct += 1;
      }
    }
    csv += std::to_string(i) + ',' + truth + ',' + predicted;
    if (base) csv += std::string(",") + base;
    csv += '\n';
  }
  write_output(a.out, csv);

  if (labeled && n > 0) {
    std::cerr << "class n correct accuracy";
    if (!a.baseline.empty()) std::cerr << " baseline_correct baseline_accuracy";
    std::cerr << '\n';
    for (const auto& [label, acc] : table) {
      std::cerr << label << ' ' << acc.total << ' ' << acc.correct << ' '
                << fmt(static_cast<double>(acc.correct) /
                       static_cast<double>(acc.total));
      if (!a.baseline.empty()) {
        std::cerr << ' ' << acc.baseline_correct << ' '
                  << fmt(static_cast<double>(acc.baseline_correct) /
                         static_cast<double>(acc.total));
      }
      std::cerr << '\n';
    }
    std::cerr << "overall " << n << ' ' << correct << ' '
              << fmt(static_cast<double>(correct) / static_cast<double>(n));
    if (!a.baseline.empty()) {
      std::cerr << ' ' << baseline_correct << ' '
                << fmt(static_cast<double>(baseline_correct) /
                       static_cast<double>(n));
    }
    std::cerr << '\n';
  }
}

struct ContourArgs {
  std::string kind, out;
  size_t resolution = 0;
};

void run_contour(const ContourArgs& a) {
  double* grid = nullptr;
  size_t len = 0;
  check(ppd_contour_grid(a.kind.c_str(), a.resolution, &grid, &len));
  std::unique_ptr<double[], decltype(&ppd_grid_free)> guard(grid,
                                                            ppd_grid_free);
  std::string csv = "u1,u2,depth\n";
  for (size_t i = 0; i < len; ++i) {
    csv += fmt(grid[3 * i]) + ',' + fmt(grid[3 * i + 1]) + ',' +
           fmt(grid[3 * i + 2]) + '\n';
  }
  write_output(a.out, csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Center-outward depth for temporal point process data"};
  app.require_subcommand(1);

  SimulateHppArgs sim_hpp;
  SimulateIppArgs sim_ipp;
  FitArgs fit;
  DepthArgs depth;
  RankArgs rank;
  GofArgs gof;
  ClassifyArgs classify;
  ContourArgs contour;

  CLI::App* simulate =
      app.add_subcommand("simulate", "Draw seeded point process realizations");
  simulate->require_subcommand(1);

  CLI::App* hpp = simulate->add_subcommand(
      "hpp", "Homogeneous Poisson process on [t1, t2]");
  hpp->add_option("--rate", sim_hpp.rate, "Event rate")->required();
  hpp->add_option("--t1", sim_hpp.t1, "Window start")->required();
  hpp->add_option("--t2", sim_hpp.t2, "Window end")->required();
  hpp->add_option("--n", sim_hpp.n, "Number of realizations")->required();
  hpp->add_option("--seed", sim_hpp.seed, "RNG seed (default 1)");
  hpp->add_option("-o,--output", sim_hpp.out, "Output file (default stdout)");
  hpp->callback([&] { run_simulate_hpp(sim_hpp); });

  CLI::App* ipp = simulate->add_subcommand(
      "ipp", "Inhomogeneous Poisson process from an intensity file");
  ipp->add_option("--intensity", sim_ipp.intensity,
                  "Two-column 't lambda' grid file")
      ->required();
  ipp->add_option("--n", sim_ipp.n, "Number of realizations")->required();
  ipp->add_option("--seed", sim_ipp.seed, "RNG seed (default 1)");
  ipp->add_option("-o,--output", sim_ipp.out, "Output file (default stdout)");
  ipp->callback([&] { run_simulate_ipp(sim_ipp); });

  CLI::App* fit_cmd =
      app.add_subcommand("fit", "Fit a depth model to a dataset");
  fit_cmd->add_option("--data", fit.data, "Dataset file")->required();
  fit_cmd->add_option("--t1", fit.t1, "Window start")->required();
  fit_cmd->add_option("--t2", fit.t2, "Window end")->required();
  fit_cmd
      ->add_option("--kind", fit.kind,
                   "hpp | sample-dirichlet | ts-dirichlet | mahalanobis")
      ->required();
  fit_cmd->add_option("--r", fit.r, "Cardinality weight exponent (default 1)");
  fit_cmd->add_option("--K", fit.cap,
                      "Largest tabulated cardinality (default: data max + 5)");
  fit_cmd->add_option("--B", fit.repetitions,
                      "Bootstrap repetitions (default 10)");
  fit_cmd->add_option("--bins", fit.bins,
                      "Intensity histogram bins (default: auto)");
  fit_cmd->add_option("--bandwidth", fit.bandwidth,
                      "Intensity smoothing bandwidth (default: auto)");
  fit_cmd->add_option("--card", fit.card,
                      "Cardinality fit: empirical | poisson | mixture "
                      "(default empirical)");
  fit_cmd->add_option("--components", fit.components,
                      "Fixed mixture size (default: BIC over 1..5)");
  fit_cmd->add_option("--seed", fit.seed, "RNG seed (default 1)");
  fit_cmd->add_option("-o,--output", fit.out, "Model JSON path")->required();
  fit_cmd->callback([&] { run_fit(fit); });

  CLI::App* depth_cmd =
      app.add_subcommand("depth", "Score a dataset under a fitted model");
  depth_cmd->add_option("--model", depth.model, "Model JSON path")->required();
  depth_cmd->add_option("--data", depth.data, "Dataset file")->required();
  depth_cmd->add_option("-o,--output", depth.out, "CSV output path")
      ->required();
  depth_cmd->callback([&] { run_depth(depth); });

  CLI::App* rank_cmd =
      app.add_subcommand("rank", "Rank a dataset by combined depth");
  rank_cmd->add_option("--model", rank.model, "Model JSON path")->required();
  rank_cmd->add_option("--data", rank.data, "Dataset file")->required();
  rank_cmd->add_option("--top", rank.top, "Keep only the first N rows");
  rank_cmd->callback([&] { run_rank(rank); });

  CLI::App* gof_cmd = app.add_subcommand(
      "gof", "Per-realization KS uniformity test plus depth");
  gof_cmd->add_option("--model", gof.model, "Model JSON path (ts-dirichlet)")
      ->required();
  gof_cmd->add_option("--data", gof.data, "Dataset file")->required();
  gof_cmd->add_option("-o,--output", gof.out, "CSV output path")->required();
  gof_cmd->callback([&] { run_gof(gof); });

  CLI::App* classify_cmd = app.add_subcommand(
      "classify", "Train on labeled data, classify a test set");
  classify_cmd->add_option("--train", classify.train, "Labeled dataset file")
      ->required();
  classify_cmd->add_option("--test", classify.test, "Dataset file")
      ->required();
  classify_cmd->add_option("--t1", classify.t1, "Window start")->required();
  classify_cmd->add_option("--t2", classify.t2, "Window end")->required();
  classify_cmd
      ->add_option("--kind", classify.kind,
                   "hpp | sample-dirichlet | ts-dirichlet | mahalanobis")
      ->required();
  classify_cmd->add_option("--r", classify.r,
                           "Cardinality weight exponent (default 1)");
  classify_cmd->add_option("--K", classify.cap,
                           "Largest tabulated cardinality");
  classify_cmd->add_option("--B", classify.repetitions,
                           "Bootstrap repetitions (default 10)");
  classify_cmd->add_option("--bins", classify.bins, "Intensity bins");
  classify_cmd->add_option("--bandwidth", classify.bandwidth,
                           "Intensity bandwidth");
  classify_cmd->add_option("--components", classify.components,
                           "Fixed mixture size (default: BIC over 1..5)");
  classify_cmd->add_option("--seed", classify.seed, "RNG seed (default 1)");
  classify_cmd
      ->add_option("--baseline", classify.baseline,
                   "likelihood | mahalanobis")
      ->check(CLI::IsMember({"likelihood", "mahalanobis"}));
  classify_cmd->add_flag("--force", classify.force,
                         "Never abstain; fall back to the cardinality pmf");
  classify_cmd->add_option("-o,--output", classify.out,
                           "CSV output path (default stdout)");
  classify_cmd->callback([&] { run_classify(classify); });

  CLI::App* contour_cmd = app.add_subcommand(
      "contour", "Two-event conditional depth on the unit simplex grid");
  contour_cmd
      ->add_option("--kind", contour.kind, "dirichlet | mahalanobis")
      ->required();
  contour_cmd->add_option("--resolution", contour.resolution,
                          "Grid points per axis")
      ->required();
  contour_cmd->add_option("-o,--output", contour.out, "CSV output path")
      ->required();
  contour_cmd->callback([&] { run_contour(contour); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.exit_code;
  }
  return 0;
}
