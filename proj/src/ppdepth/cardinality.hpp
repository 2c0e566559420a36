#pragma once

#include <cstdint>
#include <vector>

#include "ppdepth/types.hpp"

namespace ppdepth::cardinality {

enum class Kind { empirical, poisson, poisson_mixture };

// Convergence report for one EM run.
struct EmFitInfo {
  std::vector<double> log_likelihoods;  // one entry per iteration
  std::size_t iterations = 0;
  bool converged = false;
  // Components whose weight fell below 1e-6 at convergence; they are
  // dropped from the returned model and reported here.
  std::vector<std::size_t> dropped_components;
};

// Distribution over event counts 0..K. The dense pmf is cached so the
// weight normalizer max_k P(k) is a single lookup.
class CardinalityModel {
 public:
  static CardinalityModel empirical(std::vector<double> pmf);
  static CardinalityModel poisson(double lambda, long long cap);
  static CardinalityModel poisson_mixture(std::vector<double> weights,
                                          std::vector<double> means,
                                          long long cap);

  Kind kind() const noexcept { return kind_; }
  long long cap() const noexcept {
    return static_cast<long long>(pmf_.size()) - 1;
  }
  double pmf(long long k) const noexcept;
  double max_pmf() const noexcept { return max_pmf_; }

  // Parameter accessors; only valid for the matching kind.
  const std::vector<double>& empirical_pmf() const;
  double poisson_mean() const;
  const std::vector<double>& mixture_weights() const;
  const std::vector<double>& mixture_means() const;

 private:
  CardinalityModel() = default;

  Kind kind_ = Kind::empirical;
  std::vector<double> pmf_;  // dense over 0..K
  double max_pmf_ = 0.0;
  double lambda_ = 0.0;
  std::vector<double> weights_;
  std::vector<double> means_;
};

// cap < 0 picks max(counts) + 5.
CardinalityModel fit_empirical(const std::vector<long long>& counts,
                               long long cap = -1);
CardinalityModel fit_poisson_mle(const std::vector<long long>& counts,
                                 long long cap = -1);

// Poisson mixture by EM; k-means++ style seeding of the component means,
// uniform initial weights. Per-datum log-likelihood improvement below `tol`
// stops the iteration. `init_means` overrides the seeding when provided.
CardinalityModel fit_poisson_mixture_em(
    const std::vector<long long>& counts, int components, long long cap = -1,
    double tol = 1e-8, int max_iter = 500, std::uint64_t seed = 1,
    EmFitInfo* info = nullptr, const std::vector<double>* init_means = nullptr);

// BIC model selection over 1..max_components; ties prefer fewer components.
CardinalityModel fit_poisson_mixture_bic(const std::vector<long long>& counts,
                                         int max_components = 5,
                                         long long cap = -1, double tol = 1e-8,
                                         int max_iter = 500,
                                         std::uint64_t seed = 1,
                                         int* chosen_components = nullptr);

// (P(k) / max_j P(j))^r, 0 where P(k) = 0; r = 0 gives 1 wherever P(k) > 0.
double weight(const CardinalityModel& model, long long k, double r);

std::vector<long long> dataset_counts(const Dataset& data);

}  // namespace ppdepth::cardinality
