#include "ppdepth/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ppdepth/cardinality.hpp"
#include "ppdepth/error.hpp"
#include "ppdepth/stats.hpp"

namespace ppdepth::analysis {

std::vector<RankEntry> score(const depth::DepthModel& model,
                             const Dataset& data) {
  std::vector<RankEntry> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Realization& r = data.at(i);
    const depth::DepthBreakdown b = depth::combined_depth(model, r);
    out.push_back({i, static_cast<long long>(r.cardinality()), b.weight,
                   b.conditional, b.depth, b.missing_row});
  }
  return out;
}

std::vector<RankEntry> rank(const depth::DepthModel& model,
                            const Dataset& data) {
  std::vector<RankEntry> out = score(model, data);
  std::stable_sort(out.begin(), out.end(),
                   [](const RankEntry& a, const RankEntry& b) {
                     if (a.depth != b.depth) return a.depth > b.depth;
                     return a.index < b.index;
                   });
  return out;
}

DepthClassifier::DepthClassifier(std::vector<std::string> labels,
                                 std::vector<depth::DepthModel> models)
    : labels_(std::move(labels)), models_(std::move(models)) {
  if (labels_.size() != models_.size() || labels_.size() < 2) {
    raise(ErrorCode::invalid_argument,
          "classifier needs one model per label and at least two labels");
  }
  for (std::size_t i = 1; i < models_.size(); ++i) {
    if (!(models_[i].domain() == models_[0].domain()) ||
        models_[i].kind() != models_[0].kind()) {
      raise(ErrorCode::invalid_argument,
            "class models must share domain and conditional kind");
    }
  }
}

namespace {

Dataset class_subset(const Dataset& data, const std::string& label) {
  Dataset out(data.domain());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.label(i) == label) out.add(data.at(i));
  }
  return out;
}

depth::DepthModel fit_class_model(const Dataset& subset,
                                  const ClassifierConfig& config) {
  const std::vector<long long> counts = cardinality::dataset_counts(subset);
  cardinality::CardinalityModel card =
      config.mixture_components > 0
          ? cardinality::fit_poisson_mixture_em(counts,
                                                config.mixture_components,
                                                config.cap, 1e-8, 500,
                                                config.seed)
          : cardinality::fit_poisson_mixture_bic(counts, 5, config.cap, 1e-8,
                                                 500, config.seed);
  switch (config.kind) {
    case depth::ConditionalKind::hpp:
      return depth::DepthModel::hpp(subset.domain(), std::move(card),
                                    config.r);
    case depth::ConditionalKind::sample_dirichlet: {
      depth::ConditionalMeanTable means = depth::bootstrap_conditional_means(
          subset, config.cap, config.repetitions, config.seed,
          /*repair=*/true);
      return depth::DepthModel::sample_dirichlet(std::move(card), config.r,
                                                 std::move(means));
    }
    case depth::ConditionalKind::ts_dirichlet: {
      rescale::IntensityModel intensity =
          rescale::estimate_intensity(subset, config.bins, config.bandwidth);
      return depth::DepthModel::ts_dirichlet(std::move(card), config.r,
                                             std::move(intensity));
    }
    case depth::ConditionalKind::mahalanobis: {
      depth::MahalanobisTable table = depth::fit_mahalanobis_table(subset);
      return depth::DepthModel::mahalanobis(subset.domain(), std::move(card),
                                            config.r, std::move(table));
    }
  }
  raise(ErrorCode::invalid_argument, "unknown conditional kind");
}

}  // namespace

DepthClassifier train_classifier(const Dataset& data,
                                 const ClassifierConfig& config) {
  if (data.empty() || !data.labeled()) {
    raise(ErrorCode::insufficient_data,
          "classifier training needs a labeled, nonempty dataset");
  }
  const std::vector<std::string> labels = data.class_labels();
  if (labels.size() < 2) {
    raise(ErrorCode::insufficient_data,
          "classifier training needs at least two classes, got " +
              std::to_string(labels.size()));
  }
  std::vector<depth::DepthModel> models;
  models.reserve(labels.size());
  for (const std::string& label : labels) {
    models.push_back(fit_class_model(class_subset(data, label), config));
  }
  return DepthClassifier(labels, std::move(models));
}

Classification classify(const DepthClassifier& c, const Realization& s,
                        bool force) {
  Classification out;
  out.depths.reserve(c.num_classes());
  std::size_t best = 0;
  for (std::size_t i = 0; i < c.num_classes(); ++i) {
    out.depths.push_back(depth::combined_depth(c.model(i), s).depth);
    if (out.depths[i] > out.depths[best]) best = i;
  }
  const double top = out.depths[best];
  out.tie = std::count(out.depths.begin(), out.depths.end(), top) > 1;

  if (top <= 0.0) {
    if (!force) {
      out.label = "abstain";
      out.abstained = true;
      out.tie = false;
      return out;
    }
    // Forced choice: most plausible cardinality wins.
    const auto k = static_cast<long long>(s.cardinality());
    best = 0;
    double best_p = c.model(0).card().pmf(k);
    for (std::size_t i = 1; i < c.num_classes(); ++i) {
      const double p = c.model(i).card().pmf(k);
      if (p > best_p) {
        best = i;
        best_p = p;
      }
    }
  }
  out.label = c.labels()[best];
  return out;
}

LikelihoodClassifier::LikelihoodClassifier(
    std::vector<std::string> labels,
    std::vector<rescale::IntensityModel> intensities)
    : labels_(std::move(labels)), intensities_(std::move(intensities)) {
  if (labels_.size() != intensities_.size() || labels_.size() < 2) {
    raise(ErrorCode::invalid_argument,
          "likelihood classifier needs one intensity per label and at least "
          "two labels");
  }
  for (std::size_t i = 1; i < intensities_.size(); ++i) {
    if (!(intensities_[i].domain() == intensities_[0].domain())) {
      raise(ErrorCode::invalid_argument,
            "class intensities must share the time domain");
    }
  }
}

LikelihoodClassifier train_likelihood(const Dataset& data, std::size_t bins,
                                      double bandwidth) {
  if (data.empty() || !data.labeled()) {
    raise(ErrorCode::insufficient_data,
          "likelihood training needs a labeled, nonempty dataset");
  }
  const std::vector<std::string> labels = data.class_labels();
  if (labels.size() < 2) {
    raise(ErrorCode::insufficient_data,
          "likelihood training needs at least two classes, got " +
              std::to_string(labels.size()));
  }
  std::vector<rescale::IntensityModel> intensities;
  intensities.reserve(labels.size());
  for (const std::string& label : labels) {
    intensities.push_back(rescale::estimate_intensity(
        class_subset(data, label), bins, bandwidth));
  }
  return LikelihoodClassifier(labels, std::move(intensities));
}

LikelihoodClassification likelihood_classify(const LikelihoodClassifier& c,
                                             const Realization& s) {
  if (!(s.domain() == c.domain())) {
    raise(ErrorCode::domain_mismatch,
          "realization and classifier domains differ");
  }
  LikelihoodClassification out;
  out.log_likelihoods.reserve(c.num_classes());
  std::size_t best = 0;
  for (std::size_t i = 0; i < c.num_classes(); ++i) {
    const rescale::IntensityModel& m = c.intensity(i);
    double ll = -m.total();
    for (double t : s.events()) {
      const double lam = m.lambda_at(t);
      if (lam > 0.0) {
        ll += std::log(lam);
      } else {
        ll = -std::numeric_limits<double>::infinity();
        break;
      }
    }
    out.log_likelihoods.push_back(ll);
    if (out.log_likelihoods[i] > out.log_likelihoods[best]) best = i;
  }
  out.tie = std::count(out.log_likelihoods.begin(), out.log_likelihoods.end(),
                       out.log_likelihoods[best]) > 1;
  out.label = c.labels()[best];
  return out;
}

KsResult ks_uniformity(const Realization& s,
                       const rescale::IntensityModel& intensity) {
  if (s.cardinality() == 0) {
    raise(ErrorCode::empty_realization,
          "uniformity test needs at least one event");
  }
  const Realization u = rescale::rescale(s, intensity);
  KsResult out;
  out.statistic = stats::ks_statistic_uniform(u.events());
  out.p_value = stats::ks_pvalue(out.statistic, u.events().size());
  return out;
}

std::vector<ContourPoint> contour_grid(ContourKind kind,
                                       std::size_t resolution) {
  if (resolution < 2) {
    raise(ErrorCode::invalid_argument, "resolution must be >= 2");
  }
  const TimeDomain unit{0.0, 1.0};
  depth::ConditionalMeanTable means(
      unit, {{2, {1.0 / 3.0, 2.0 / 3.0}}});
  // Mean and covariance of two sorted Uniform[0,1] draws.
  const std::vector<double> mean{1.0 / 3.0, 2.0 / 3.0};
  const std::vector<double> cov{1.0 / 18.0, 1.0 / 36.0, 1.0 / 36.0,
                                1.0 / 18.0};

  const double h = 1.0 / static_cast<double>(resolution - 1);
  std::vector<ContourPoint> out;
  for (std::size_t i = 0; i < resolution; ++i) {
    for (std::size_t j = 0; j < resolution; ++j) {
      const double u1 = static_cast<double>(i) * h;
      const double u2 = static_cast<double>(j) * h;
      if (u1 + u2 > 1.0 + 1e-12) continue;
      const double s2 = std::min(u1 + u2, 1.0);
      const Realization s(unit, {u1, s2});
      const double d =
          kind == ContourKind::dirichlet
              ? depth::dirichlet_conditional_depth(s, means)
              : depth::mahalanobis_conditional_depth(s, mean, cov, 0.0);
      out.push_back({u1, u2, d});
    }
  }
  return out;
}

}  // namespace ppdepth::analysis
