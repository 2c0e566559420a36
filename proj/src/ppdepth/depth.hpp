#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ppdepth/cardinality.hpp"
#include "ppdepth/rescale.hpp"
#include "ppdepth/types.hpp"

namespace ppdepth::depth {

// Per-cardinality mean event-time vectors. Every stored row is strictly
// increasing between the window endpoints; construction rejects anything
// else. Cardinality 0 needs no row (its conditional depth is 1).
class ConditionalMeanTable {
 public:
  ConditionalMeanTable(TimeDomain domain,
                       std::map<long long, std::vector<double>> means);

  const TimeDomain& domain() const noexcept { return domain_; }
  bool has(long long k) const noexcept;
  const std::vector<double>& row(long long k) const;
  const std::map<long long, std::vector<double>>& rows() const noexcept {
    return means_;
  }

 private:
  TimeDomain domain_;
  std::map<long long, std::vector<double>> means_;
};

// Resample every realization to exactly k events (uniform deletion when too
// long, uniform-with-replacement padding from the pooled event list when too
// short), sort, average elementwise; repeat B times and average the rows.
// Rows that fail strict monotonicity raise non_monotone_means unless
// `repair` is set, in which case they are isotonically adjusted with a
// minimum gap of 1e-6 * span and reported through `repaired_rows`.
ConditionalMeanTable bootstrap_conditional_means(
    const Dataset& data, long long cap = -1, int repetitions = 10,
    std::uint64_t seed = 1, bool repair = false,
    std::vector<long long>* repaired_rows = nullptr);

// (k+1) prod_i (gap_i / span)^(1/(k+1)); 1 at k = 0; exactly 0 on the
// simplex boundary. Log-domain evaluation, clamped to [0, 1].
double hpp_conditional_depth(const Realization& s);

// prod_i (gap_i / mean_gap_i)^(mean_gap_i / span) against the stored mean
// row for |s|; exactly 1 when s equals the stored row.
double dirichlet_conditional_depth(const Realization& s,
                                   const ConditionalMeanTable& means);

// Regularized Mahalanobis baseline: 1 / (1 + (s-mean)^T (Sigma+ridge I)^{-1}
// (s-mean)). Positive on the simplex boundary by design; that contrast with
// the Dirichlet depths is the point of carrying it around.
double mahalanobis_conditional_depth(const Realization& s,
                                     const std::vector<double>& mean,
                                     const std::vector<double>& covariance,
                                     double ridge);

struct MahalanobisRow {
  std::vector<double> mean;        // strictly ordered event-time means
  std::vector<double> covariance;  // row major k x k
  double ridge;
};
using MahalanobisTable = std::map<long long, MahalanobisRow>;

// Per-cardinality mean and MLE covariance of the observed realizations.
// ridge = max(ridge_scale * trace/k, 1e-8 * span^2).
MahalanobisTable fit_mahalanobis_table(const Dataset& data,
                                       double ridge_scale = 1e-6);

enum class ConditionalKind { hpp, sample_dirichlet, ts_dirichlet, mahalanobis };

// A complete depth recipe: cardinality weight w(|s|)^r times one of the
// conditional depths.
class DepthModel {
 public:
  static DepthModel hpp(TimeDomain domain, cardinality::CardinalityModel card,
                        double r);
  static DepthModel sample_dirichlet(cardinality::CardinalityModel card,
                                     double r, ConditionalMeanTable means);
  static DepthModel ts_dirichlet(cardinality::CardinalityModel card, double r,
                                 rescale::IntensityModel intensity);
  static DepthModel mahalanobis(TimeDomain domain,
                                cardinality::CardinalityModel card, double r,
                                MahalanobisTable table);

  const TimeDomain& domain() const noexcept { return domain_; }
  const cardinality::CardinalityModel& card() const noexcept { return card_; }
  double r() const noexcept { return r_; }
  ConditionalKind kind() const noexcept { return kind_; }

  const ConditionalMeanTable& means() const;
  const rescale::IntensityModel& intensity() const;
  const MahalanobisTable& mahalanobis_table() const;

 private:
  DepthModel(TimeDomain domain, cardinality::CardinalityModel card, double r,
             ConditionalKind kind);

  TimeDomain domain_;
  cardinality::CardinalityModel card_;
  double r_;
  ConditionalKind kind_;
  std::optional<ConditionalMeanTable> means_;
  std::optional<rescale::IntensityModel> intensity_;
  std::optional<MahalanobisTable> mahal_;
};

struct DepthBreakdown {
  double weight = 0.0;
  double conditional = 0.0;
  double depth = 0.0;
  // True when P(|s|) > 0 but the conditional table has no row for |s|;
  // the depth is then 0 and callers are expected to surface the event.
  bool missing_row = false;
};

// Conditional depth of s under the model's conditional config alone.
// Raises missing_cardinality when a required table row is absent.
double conditional_depth(const DepthModel& model, const Realization& s);

DepthBreakdown combined_depth(const DepthModel& model, const Realization& s);

// Membership in the alpha-trimmed region { s : D(s) >= alpha }, alpha in (0,1].
bool trimmed_region_member(const DepthModel& model, const Realization& s,
                           double alpha);

}  // namespace ppdepth::depth
