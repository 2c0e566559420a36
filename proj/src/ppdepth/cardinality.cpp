#include "ppdepth/cardinality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ppdepth/rng.hpp"
#include "ppdepth/stats.hpp"

namespace ppdepth::cardinality {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDropThreshold = 1e-6;

void finalize_max(std::vector<double>& pmf, double& max_pmf) {
  max_pmf = *std::max_element(pmf.begin(), pmf.end());
  if (!(max_pmf > 0.0)) {
    raise(ErrorCode::invalid_argument,
          "cardinality pmf has no positive mass below the cap");
  }
}

long long default_cap(const std::vector<long long>& counts) {
  long long m = 0;
  for (long long c : counts) m = std::max(m, c);
  return m + 5;
}

void check_counts(const std::vector<long long>& counts) {
  if (counts.empty()) {
    raise(ErrorCode::invalid_argument, "count sample must be nonempty");
  }
  for (long long c : counts) {
    if (c < 0) {
      raise(ErrorCode::invalid_argument, "counts must be nonnegative");
    }
  }
}

}  // namespace

CardinalityModel CardinalityModel::empirical(std::vector<double> pmf) {
  if (pmf.empty()) {
    raise(ErrorCode::invalid_argument, "empirical pmf must be nonempty");
  }
  double sum = 0.0;
  for (double p : pmf) {
    if (!std::isfinite(p) || p < 0.0) {
      raise(ErrorCode::invalid_argument, "pmf values must be nonnegative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    raise(ErrorCode::invalid_argument, "empirical pmf must sum to 1");
  }
  CardinalityModel m;
  m.kind_ = Kind::empirical;
  m.pmf_ = std::move(pmf);
  finalize_max(m.pmf_, m.max_pmf_);
  return m;
}

CardinalityModel CardinalityModel::poisson(double lambda, long long cap) {
  if (!std::isfinite(lambda) || lambda < 0.0 || cap < 0) {
    raise(ErrorCode::invalid_argument,
          "poisson cardinality needs lambda >= 0 and cap >= 0");
  }
  CardinalityModel m;
  m.kind_ = Kind::poisson;
  m.lambda_ = lambda;
  m.pmf_.resize(static_cast<std::size_t>(cap) + 1);
  for (long long k = 0; k <= cap; ++k) {
    m.pmf_[static_cast<std::size_t>(k)] = stats::poisson_pmf(k, lambda);
  }
  finalize_max(m.pmf_, m.max_pmf_);
  return m;
}

CardinalityModel CardinalityModel::poisson_mixture(std::vector<double> weights,
                                                   std::vector<double> means,
                                                   long long cap) {
  if (weights.empty() || weights.size() != means.size() || cap < 0) {
    raise(ErrorCode::invalid_argument,
          "mixture needs matching nonempty weights/means and cap >= 0");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] > 0.0) || weights[j] > 1.0 || !std::isfinite(means[j]) ||
        means[j] < 0.0) {
      raise(ErrorCode::invalid_argument,
            "mixture weights must lie in (0,1] and means must be >= 0");
    }
    sum += weights[j];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    raise(ErrorCode::invalid_argument, "mixture weights must sum to 1");
  }
  CardinalityModel m;
  m.kind_ = Kind::poisson_mixture;
  m.weights_ = std::move(weights);
  m.means_ = std::move(means);
  m.pmf_.resize(static_cast<std::size_t>(cap) + 1);
  for (long long k = 0; k <= cap; ++k) {
    double p = 0.0;
    for (std::size_t j = 0; j < m.weights_.size(); ++j) {
      p += m.weights_[j] * stats::poisson_pmf(k, m.means_[j]);
    }
    m.pmf_[static_cast<std::size_t>(k)] = p;
  }
  finalize_max(m.pmf_, m.max_pmf_);
  return m;
}

double CardinalityModel::pmf(long long k) const noexcept {
  if (k < 0 || k > cap()) return 0.0;
  return pmf_[static_cast<std::size_t>(k)];
}

const std::vector<double>& CardinalityModel::empirical_pmf() const {
  if (kind_ != Kind::empirical) {
    raise(ErrorCode::invalid_argument, "not an empirical model");
  }
  return pmf_;
}

double CardinalityModel::poisson_mean() const {
  if (kind_ != Kind::poisson) {
    raise(ErrorCode::invalid_argument, "not a poisson model");
  }
  return lambda_;
}

const std::vector<double>& CardinalityModel::mixture_weights() const {
  if (kind_ != Kind::poisson_mixture) {
    raise(ErrorCode::invalid_argument, "not a mixture model");
  }
  return weights_;
}

const std::vector<double>& CardinalityModel::mixture_means() const {
  if (kind_ != Kind::poisson_mixture) {
    raise(ErrorCode::invalid_argument, "not a mixture model");
  }
  return means_;
}

CardinalityModel fit_empirical(const std::vector<long long>& counts,
                               long long cap) {
  check_counts(counts);
  if (cap < 0) cap = default_cap(counts);
  std::vector<double> tally(static_cast<std::size_t>(cap) + 1, 0.0);
  for (long long c : counts) {
    if (c > cap) {
      raise(ErrorCode::cap_exceeded,
            "count " + std::to_string(c) + " exceeds cap " +
                std::to_string(cap));
    }
    tally[static_cast<std::size_t>(c)] += 1.0;
  }
  const double n = static_cast<double>(counts.size());
  for (double& t : tally) t /= n;
  return CardinalityModel::empirical(std::move(tally));
}

CardinalityModel fit_poisson_mle(const std::vector<long long>& counts,
                                 long long cap) {
  check_counts(counts);
  if (cap < 0) cap = default_cap(counts);
  double sum = 0.0;
  for (long long c : counts) sum += static_cast<double>(c);
  const double lambda = sum / static_cast<double>(counts.size());
  return CardinalityModel::poisson(lambda, cap);
}

namespace {

// k-means++ style seeding on the raw counts.
std::vector<double> seed_means(const std::vector<long long>& counts,
                               int components, std::mt19937_64& gen) {
  const std::size_t n = counts.size();
  std::vector<double> centers;
  centers.reserve(static_cast<std::size_t>(components));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  centers.push_back(static_cast<double>(counts[pick(gen)]));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (centers.size() < static_cast<std::size_t>(components)) {
    std::vector<double> d2(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = kInf;
      for (double c : centers) {
        const double d = static_cast<double>(counts[i]) - c;
        best = std::min(best, d * d);
      }
      d2[i] = best;
      total += best;
    }
    std::size_t choice;
    if (total > 0.0) {
      const double target = u(gen) * total;
      double acc = 0.0;
      choice = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          choice = i;
          break;
        }
      }
    } else {
      choice = pick(gen);  // all points coincide with a center
    }
    centers.push_back(static_cast<double>(counts[choice]));
  }
  // Zero seeds stall on positive counts; nudge them off the boundary.
  for (double& c : centers) c = std::max(c, 0.1);
  return centers;
}

}  // namespace

CardinalityModel fit_poisson_mixture_em(const std::vector<long long>& counts,
                                        int components, long long cap,
                                        double tol, int max_iter,
                                        std::uint64_t seed, EmFitInfo* info,
                                        const std::vector<double>* init_means) {
  check_counts(counts);
  if (components < 1) {
    raise(ErrorCode::invalid_argument, "mixture needs >= 1 component");
  }
  if (cap < 0) cap = default_cap(counts);
  const std::size_t n = counts.size();
  const std::size_t m = static_cast<std::size_t>(components);

  std::vector<double> lambdas;
  if (init_means) {
    if (init_means->size() != m) {
      raise(ErrorCode::invalid_argument,
            "init_means size must match component count");
    }
    lambdas = *init_means;
  } else {
    auto gen = substream(seed, 0);
    lambdas = seed_means(counts, components, gen);
  }
  std::vector<double> pis(m, 1.0 / static_cast<double>(m));

  EmFitInfo local;
  EmFitInfo& report = info ? *info : local;
  report = EmFitInfo{};

  std::vector<double> log_terms(m);
  std::vector<double> resp(n * m);
  double prev_ll = -kInf;

  for (int iter = 0; iter < max_iter; ++iter) {
    // E step; also the log-likelihood of the current parameters.
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        log_terms[j] =
            std::log(pis[j]) + stats::log_poisson_pmf(counts[i], lambdas[j]);
      }
      const double lse = stats::logsumexp(log_terms);
      if (lse == -kInf) {
        // No component explains this datum (zero-lambda inits only);
        // spread the responsibility uniformly.
        for (std::size_t j = 0; j < m; ++j) {
          resp[i * m + j] = 1.0 / static_cast<double>(m);
        }
      } else {
        for (std::size_t j = 0; j < m; ++j) {
          resp[i * m + j] = std::exp(log_terms[j] - lse);
        }
        ll += lse;
      }
    }
    report.log_likelihoods.push_back(ll);
    report.iterations = static_cast<std::size_t>(iter) + 1;

    // M step.
    for (std::size_t j = 0; j < m; ++j) {
      double mass = 0.0;
      double weighted = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        mass += resp[i * m + j];
        weighted += resp[i * m + j] * static_cast<double>(counts[i]);
      }
      pis[j] = mass / static_cast<double>(n);
      // Dead components keep their mean so the drop rule below stays
      // well defined.
      if (mass >= 1e-12) lambdas[j] = weighted / mass;
    }

    if (iter > 0 && (ll - prev_ll) / static_cast<double>(n) < tol) {
      report.converged = true;
      prev_ll = ll;
      break;
    }
    prev_ll = ll;
  }

  // Drop degenerate components, renormalize the survivors.
  std::vector<double> out_w;
  std::vector<double> out_l;
  for (std::size_t j = 0; j < m; ++j) {
    if (pis[j] < kDropThreshold) {
      report.dropped_components.push_back(j);
    } else {
      out_w.push_back(pis[j]);
      out_l.push_back(lambdas[j]);
    }
  }
  double wsum = 0.0;
  for (double w : out_w) wsum += w;
  for (double& w : out_w) w /= wsum;

  return CardinalityModel::poisson_mixture(std::move(out_w), std::move(out_l),
                                           cap);
}

CardinalityModel fit_poisson_mixture_bic(const std::vector<long long>& counts,
                                         int max_components, long long cap,
                                         double tol, int max_iter,
                                         std::uint64_t seed,
                                         int* chosen_components) {
  check_counts(counts);
  if (max_components < 1) {
    raise(ErrorCode::invalid_argument, "max_components must be >= 1");
  }
  const double logn = std::log(static_cast<double>(counts.size()));
  double best_bic = kInf;
  std::optional<CardinalityModel> best;
  int best_m = 1;
  for (int m = 1; m <= max_components; ++m) {
    EmFitInfo fit_info;
    CardinalityModel candidate = fit_poisson_mixture_em(
        counts, m, cap, tol, max_iter, seed, &fit_info);
    const double ll = fit_info.log_likelihoods.back();
    const auto m_eff =
        static_cast<double>(candidate.mixture_weights().size());
    const double bic = -2.0 * ll + (2.0 * m_eff - 1.0) * logn;
    if (!best || bic < best_bic) {
      best_bic = bic;
      best = std::move(candidate);
      best_m = m;
    }
  }
  if (chosen_components) *chosen_components = best_m;
  return *std::move(best);
}

double weight(const CardinalityModel& model, long long k, double r) {
  if (!(r >= 0.0)) {
    raise(ErrorCode::invalid_argument, "weight exponent r must be >= 0");
  }
  const double p = model.pmf(k);
  if (p <= 0.0) return 0.0;
  if (r == 0.0) return 1.0;
  return std::pow(p / model.max_pmf(), r);
}

std::vector<long long> dataset_counts(const Dataset& data) {
  std::vector<long long> out;
  out.reserve(data.size());
  for (const auto& r : data.realizations()) {
    out.push_back(static_cast<long long>(r.cardinality()));
  }
  return out;
}

}  // namespace ppdepth::cardinality
