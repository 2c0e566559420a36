#include "ppdepth/depth.hpp"

#include <algorithm>
#include <cmath>

#include "ppdepth/rng.hpp"
#include "ppdepth/stats.hpp"
#include "ppdepth/textio.hpp"

namespace ppdepth::depth {

namespace {

// Strict interior ordering with the window endpoints as sentinels.
bool row_is_monotone(const TimeDomain& dom, const std::vector<double>& row) {
  double prev = dom.t1;
  for (double v : row) {
    if (!std::isfinite(v) || !(v > prev)) return false;
    prev = v;
  }
  return prev < dom.t2;
}

}  // namespace

ConditionalMeanTable::ConditionalMeanTable(
    TimeDomain domain, std::map<long long, std::vector<double>> means)
    : domain_(domain), means_(std::move(means)) {
  for (const auto& [k, row] : means_) {
    if (k < 1 || row.size() != static_cast<std::size_t>(k)) {
      raise(ErrorCode::invalid_argument,
            "mean table row " + std::to_string(k) + " has wrong length");
    }
    if (!row_is_monotone(domain_, row)) {
      raise(ErrorCode::non_monotone_means,
            "mean vector for cardinality " + std::to_string(k) +
                " is not strictly increasing inside the window");
    }
  }
}

bool ConditionalMeanTable::has(long long k) const noexcept {
  return means_.count(k) != 0;
}

const std::vector<double>& ConditionalMeanTable::row(long long k) const {
  auto it = means_.find(k);
  if (it == means_.end()) {
    raise(ErrorCode::missing_cardinality,
          "no conditional mean row for cardinality " + std::to_string(k));
  }
  return it->second;
}

ConditionalMeanTable bootstrap_conditional_means(
    const Dataset& data, long long cap, int repetitions, std::uint64_t seed,
    bool repair, std::vector<long long>* repaired_rows) {
  if (data.empty()) {
    raise(ErrorCode::empty_dataset, "bootstrap needs a nonempty dataset");
  }
  if (repetitions < 1) {
    raise(ErrorCode::invalid_argument, "repetitions must be >= 1");
  }
  long long max_card = 0;
  std::vector<double> pool;
  for (const auto& r : data.realizations()) {
    max_card = std::max(max_card,
                        static_cast<long long>(r.cardinality()));
    pool.insert(pool.end(), r.events().begin(), r.events().end());
  }
  if (cap < 0) cap = max_card + 5;
  if (cap < 1) {
    raise(ErrorCode::invalid_argument, "cap must be >= 1");
  }

  const TimeDomain& dom = data.domain();
  const std::size_t n = data.size();
  const double span = dom.span();

  std::map<long long, std::vector<double>> rows;
  std::vector<std::size_t> keep;
  std::vector<double> resampled;

  for (long long k = 1; k <= cap; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    std::vector<double> avg(ks, 0.0);
    for (int b = 0; b < repetitions; ++b) {
      auto gen = substream(seed, static_cast<std::uint64_t>(b));
      std::vector<double> acc(ks, 0.0);
      for (const auto& r : data.realizations()) {
        const auto& ev = r.events();
        resampled.clear();
        if (ev.size() >= ks) {
          if (ev.size() == ks) {
            resampled.assign(ev.begin(), ev.end());
          } else {
            // Keep a uniform k-subset: partial Fisher-Yates over indices.
            keep.resize(ev.size());
            for (std::size_t i = 0; i < ev.size(); ++i) keep[i] = i;
            for (std::size_t i = 0; i < ks; ++i) {
              std::uniform_int_distribution<std::size_t> pick(
                  i, ev.size() - 1);
              std::swap(keep[i], keep[pick(gen)]);
            }
            keep.resize(ks);
            std::sort(keep.begin(), keep.end());
            for (std::size_t idx : keep) resampled.push_back(ev[idx]);
          }
        } else {
          if (pool.empty()) {
            raise(ErrorCode::pool_empty,
                  "padding required for cardinality " + std::to_string(k) +
                      " but the pooled event list is empty");
          }
          resampled.assign(ev.begin(), ev.end());
          std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
          while (resampled.size() < ks) resampled.push_back(pool[pick(gen)]);
          std::sort(resampled.begin(), resampled.end());
        }
        for (std::size_t i = 0; i < ks; ++i) acc[i] += resampled[i];
      }
      for (std::size_t i = 0; i < ks; ++i) {
        avg[i] += acc[i] / static_cast<double>(n);
      }
    }
    for (double& v : avg) v /= static_cast<double>(repetitions);

    if (!row_is_monotone(dom, avg)) {
      if (!repair) {
        raise(ErrorCode::non_monotone_means,
              "bootstrap means for cardinality " + std::to_string(k) +
                  " are not strictly increasing");
      }
      const double gap = 1e-6 * span;
      double lo = dom.t1;
      for (double& v : avg) {
        v = std::max(v, lo + gap);
        lo = v;
      }
      double hi = dom.t2;
      for (std::size_t i = avg.size(); i-- > 0;) {
        avg[i] = std::min(avg[i], hi - gap);
        hi = avg[i];
      }
      if (!row_is_monotone(dom, avg)) {
        raise(ErrorCode::non_monotone_means,
              "cardinality " + std::to_string(k) +
                  " cannot be repaired within the window");
      }
      if (repaired_rows) repaired_rows->push_back(k);
    }
    rows.emplace(k, std::move(avg));
  }
  return ConditionalMeanTable(dom, std::move(rows));
}

double hpp_conditional_depth(const Realization& s) {
  const std::size_t k = s.cardinality();
  if (k == 0) return 1.0;
  const double span = s.domain().span();
  const double inv = 1.0 / static_cast<double>(k + 1);
  double prev = s.domain().t1;
  double log_sum = 0.0;
  for (std::size_t i = 0; i <= k; ++i) {
    const double cur = i < k ? s.events()[i] : s.domain().t2;
    const double gap = cur - prev;
    if (!(gap > 0.0)) return 0.0;
    log_sum += inv * std::log(gap / span);
    prev = cur;
  }
  const double d = std::exp(std::log(static_cast<double>(k + 1)) + log_sum);
  return std::min(d, 1.0);
}

double dirichlet_conditional_depth(const Realization& s,
                                   const ConditionalMeanTable& means) {
  if (!(s.domain() == means.domain())) {
    raise(ErrorCode::domain_mismatch,
          "realization and mean table domains differ");
  }
  const std::size_t k = s.cardinality();
  if (k == 0) return 1.0;
  const auto& mu = means.row(static_cast<long long>(k));

  const double span = s.domain().span();
  double prev_s = s.domain().t1;
  double prev_m = s.domain().t1;
  double log_sum = 0.0;
  for (std::size_t i = 0; i <= k; ++i) {
    const double cur_s = i < k ? s.events()[i] : s.domain().t2;
    const double cur_m = i < k ? mu[i] : s.domain().t2;
    const double gap = cur_s - prev_s;
    const double mgap = cur_m - prev_m;
    if (!(gap > 0.0)) return 0.0;
    log_sum += (mgap / span) * std::log(gap / mgap);
    prev_s = cur_s;
    prev_m = cur_m;
  }
  return std::min(std::exp(log_sum), 1.0);
}

double mahalanobis_conditional_depth(const Realization& s,
                                     const std::vector<double>& mean,
                                     const std::vector<double>& covariance,
                                     double ridge) {
  const std::size_t k = s.cardinality();
  if (mean.size() != k || covariance.size() != k * k) {
    raise(ErrorCode::dimension_mismatch,
          "mean/covariance size does not match the realization cardinality");
  }
  if (k == 0) return 1.0;
  std::vector<double> diff(k);
  for (std::size_t i = 0; i < k; ++i) diff[i] = s.events()[i] - mean[i];
  const double q = stats::ridged_quadform(covariance, k, ridge, diff);
  return 1.0 / (1.0 + q);
}

MahalanobisTable fit_mahalanobis_table(const Dataset& data,
                                       double ridge_scale) {
  if (data.empty()) {
    raise(ErrorCode::empty_dataset, "mahalanobis fit needs a nonempty dataset");
  }
  const double span = data.domain().span();
  std::map<long long, std::vector<const Realization*>> groups;
  for (const auto& r : data.realizations()) {
    if (r.cardinality() > 0) {
      groups[static_cast<long long>(r.cardinality())].push_back(&r);
    }
  }
  MahalanobisTable table;
  for (const auto& [k, members] : groups) {
    const auto ks = static_cast<std::size_t>(k);
    const double nk = static_cast<double>(members.size());
    std::vector<double> mean(ks, 0.0);
    for (const auto* r : members) {
      for (std::size_t i = 0; i < ks; ++i) mean[i] += r->events()[i];
    }
    for (double& v : mean) v /= nk;

    std::vector<double> cov(ks * ks, 0.0);
    for (const auto* r : members) {
      for (std::size_t i = 0; i < ks; ++i) {
        const double di = r->events()[i] - mean[i];
        for (std::size_t j = 0; j <= i; ++j) {
          cov[i * ks + j] += di * (r->events()[j] - mean[j]);
        }
      }
    }
    double trace = 0.0;
    for (std::size_t i = 0; i < ks; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        cov[i * ks + j] /= nk;
        cov[j * ks + i] = cov[i * ks + j];
      }
      trace += cov[i * ks + i];
    }
    const double ridge = std::max(ridge_scale * trace / static_cast<double>(k),
                                  1e-8 * span * span);
    table.emplace(k, MahalanobisRow{std::move(mean), std::move(cov), ridge});
  }
  return table;
}

DepthModel::DepthModel(TimeDomain domain, cardinality::CardinalityModel card,
                       double r, ConditionalKind kind)
    : domain_(domain), card_(std::move(card)), r_(r), kind_(kind) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    raise(ErrorCode::invalid_argument,
          "weight exponent r must be finite and >= 0, got " +
              format_double(r));
  }
}

DepthModel DepthModel::hpp(TimeDomain domain,
                           cardinality::CardinalityModel card, double r) {
  return DepthModel(domain, std::move(card), r, ConditionalKind::hpp);
}

DepthModel DepthModel::sample_dirichlet(cardinality::CardinalityModel card,
                                        double r, ConditionalMeanTable means) {
  DepthModel m(means.domain(), std::move(card), r,
               ConditionalKind::sample_dirichlet);
  m.means_ = std::move(means);
  return m;
}

DepthModel DepthModel::ts_dirichlet(cardinality::CardinalityModel card,
                                    double r,
                                    rescale::IntensityModel intensity) {
  DepthModel m(intensity.domain(), std::move(card), r,
               ConditionalKind::ts_dirichlet);
  m.intensity_ = std::move(intensity);
  return m;
}

DepthModel DepthModel::mahalanobis(TimeDomain domain,
                                   cardinality::CardinalityModel card,
                                   double r, MahalanobisTable table) {
  DepthModel m(domain, std::move(card), r, ConditionalKind::mahalanobis);
  m.mahal_ = std::move(table);
  return m;
}

const ConditionalMeanTable& DepthModel::means() const {
  if (!means_) {
    raise(ErrorCode::invalid_argument, "model has no conditional mean table");
  }
  return *means_;
}

const rescale::IntensityModel& DepthModel::intensity() const {
  if (!intensity_) {
    raise(ErrorCode::invalid_argument, "model has no intensity");
  }
  return *intensity_;
}

const MahalanobisTable& DepthModel::mahalanobis_table() const {
  if (!mahal_) {
    raise(ErrorCode::invalid_argument, "model has no mahalanobis table");
  }
  return *mahal_;
}

double conditional_depth(const DepthModel& model, const Realization& s) {
  if (!(s.domain() == model.domain())) {
    raise(ErrorCode::domain_mismatch,
          "realization and model domains differ");
  }
  const auto k = static_cast<long long>(s.cardinality());
  if (k == 0) return 1.0;
  switch (model.kind()) {
    case ConditionalKind::hpp:
      return hpp_conditional_depth(s);
    case ConditionalKind::sample_dirichlet:
      return dirichlet_conditional_depth(s, model.means());
    case ConditionalKind::ts_dirichlet:
      return rescale::ts_conditional_depth(s, model.intensity());
    case ConditionalKind::mahalanobis: {
      const auto& table = model.mahalanobis_table();
      auto it = table.find(k);
      if (it == table.end()) {
        raise(ErrorCode::missing_cardinality,
              "no mahalanobis row for cardinality " + std::to_string(k));
      }
      return mahalanobis_conditional_depth(s, it->second.mean,
                                           it->second.covariance,
                                           it->second.ridge);
    }
  }
  raise(ErrorCode::invalid_argument, "unknown conditional kind");
}

namespace {

bool needs_row(ConditionalKind kind) {
  return kind == ConditionalKind::sample_dirichlet ||
         kind == ConditionalKind::mahalanobis;
}

bool has_row(const DepthModel& model, long long k) {
  if (model.kind() == ConditionalKind::sample_dirichlet) {
    return model.means().has(k);
  }
  return model.mahalanobis_table().count(k) != 0;
}

}  // namespace

DepthBreakdown combined_depth(const DepthModel& model, const Realization& s) {
  if (!(s.domain() == model.domain())) {
    raise(ErrorCode::domain_mismatch,
          "realization and model domains differ");
  }
  const auto k = static_cast<long long>(s.cardinality());
  const double w = cardinality::weight(model.card(), k, model.r());

  DepthBreakdown out;
  out.weight = w;
  if (k > 0 && needs_row(model.kind()) && !has_row(model, k)) {
    // Weighted mass with no conditional row: depth is 0 by convention and
    // the caller is told why.
    out.missing_row = w > 0.0;
    return out;
  }
  out.conditional = conditional_depth(model, s);
  out.depth = w * out.conditional;
  return out;
}

bool trimmed_region_member(const DepthModel& model, const Realization& s,
                           double alpha) {
  if (!(alpha > 0.0) || !(alpha <= 1.0)) {
    raise(ErrorCode::invalid_argument, "alpha must lie in (0, 1]");
  }
  return combined_depth(model, s).depth >= alpha;
}

}  // namespace ppdepth::depth
