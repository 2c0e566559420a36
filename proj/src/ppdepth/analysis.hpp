#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ppdepth/depth.hpp"
#include "ppdepth/rescale.hpp"
#include "ppdepth/types.hpp"

namespace ppdepth::analysis {

struct RankEntry {
  std::size_t index = 0;
  long long cardinality = 0;
  double weight = 0.0;
  double conditional = 0.0;
  double depth = 0.0;
  bool missing_row = false;
};

// Per-realization breakdowns in input order.
std::vector<RankEntry> score(const depth::DepthModel& model,
                             const Dataset& data);

// Sorted by combined depth descending; ties broken by index ascending, so
// permuting the input order never changes the (index -> depth) mapping.
std::vector<RankEntry> rank(const depth::DepthModel& model,
                            const Dataset& data);

struct ClassifierConfig {
  depth::ConditionalKind kind = depth::ConditionalKind::sample_dirichlet;
  double r = 1.0;
  long long cap = -1;          // cardinality table cap, < 0 picks per-class
  int repetitions = 10;        // bootstrap resampling rounds
  std::size_t bins = 0;        // intensity histogram bins, 0 = auto
  double bandwidth = 0.0;      // intensity smoothing bandwidth, <= 0 = auto
  int mixture_components = 0;  // 0 = BIC search over 1..5
  std::uint64_t seed = 1;
};

// One depth model per class label, all sharing domain and conditional kind.
class DepthClassifier {
 public:
  DepthClassifier(std::vector<std::string> labels,
                  std::vector<depth::DepthModel> models);

  std::size_t num_classes() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const depth::DepthModel& model(std::size_t i) const {
    return models_.at(i);
  }
  const TimeDomain& domain() const noexcept { return models_.front().domain(); }

 private:
  std::vector<std::string> labels_;  // sorted ascending
  std::vector<depth::DepthModel> models_;
};

struct Classification {
  std::string label;           // "abstain" when nothing scores above zero
  std::vector<double> depths;  // per class, aligned with labels()
  bool tie = false;
  bool abstained = false;
};

// Every class gets its own cardinality mixture and conditional fit; the same
// seed is reused per class so identical training classes produce identical
// models.
DepthClassifier train_classifier(const Dataset& data,
                                 const ClassifierConfig& config);

// Argmax of combined depth; exact ties go to the smallest label and are
// flagged. With force = true an all-zero score vector falls back to the class
// whose cardinality pmf is largest at |s| instead of abstaining.
Classification classify(const DepthClassifier& c, const Realization& s,
                        bool force = false);

// Inhomogeneous-Poisson likelihood baseline: one smoothed intensity per class.
class LikelihoodClassifier {
 public:
  LikelihoodClassifier(std::vector<std::string> labels,
                       std::vector<rescale::IntensityModel> intensities);

  std::size_t num_classes() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const rescale::IntensityModel& intensity(std::size_t i) const {
    return intensities_.at(i);
  }
  const TimeDomain& domain() const noexcept {
    return intensities_.front().domain();
  }

 private:
  std::vector<std::string> labels_;
  std::vector<rescale::IntensityModel> intensities_;
};

struct LikelihoodClassification {
  std::string label;
  std::vector<double> log_likelihoods;  // per class, aligned with labels()
  bool tie = false;
};

LikelihoodClassifier train_likelihood(const Dataset& data,
                                      std::size_t bins = 0,
                                      double bandwidth = 0.0);

// Score is sum_i log lambda_c(s_i) minus the integrated intensity; an event
// where lambda_c = 0 sends the class to -inf.
LikelihoodClassification likelihood_classify(const LikelihoodClassifier& c,
                                             const Realization& s);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

// One-sample KS of the rescaled events against Uniform[0,1].
KsResult ks_uniformity(const Realization& s,
                       const rescale::IntensityModel& intensity);

enum class ContourKind { dirichlet, mahalanobis };

struct ContourPoint {
  double u1 = 0.0;
  double u2 = 0.0;
  double depth = 0.0;
};

// Conditional depth of the two-event realization with gaps (u1, u2) on [0,1],
// sampled on a regular grid over {u1 + u2 <= 1, u_i >= 0}. The Dirichlet grid
// is centered at the even partition; the Mahalanobis grid uses the uniform
// order-statistic mean and covariance.
std::vector<ContourPoint> contour_grid(ContourKind kind,
                                       std::size_t resolution);

}  // namespace ppdepth::analysis
