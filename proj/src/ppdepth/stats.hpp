#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ppdepth::stats {

// log P(X = k) for X ~ Poisson(lambda); lambda = 0 is the point mass at 0.
double log_poisson_pmf(long long k, double lambda);
double poisson_pmf(long long k, double lambda);

// log sum exp with the usual max shift; empty or all -inf input gives -inf.
double logsumexp(const std::vector<double>& xs);

// Regularized incomplete beta I_x(a, b), continued fraction evaluation.
double reg_inc_beta(double a, double b, double x);

// CDF of Beta(a, b) at x.
inline double beta_cdf(double x, double a, double b) {
  return reg_inc_beta(a, b, x);
}

// Kolmogorov limiting survival function Q(t) = P(sup|B(t)| > t).
double kolmogorov_q(double t);

// One-sample KS statistic against Uniform[0,1]; values are copied and sorted.
double ks_statistic_uniform(std::vector<double> values);

// One-sample KS statistic of ascending `sorted` against an arbitrary CDF.
double ks_statistic(const std::vector<double>& sorted,
                    const std::function<double(double)>& cdf);

// Asymptotic p-value with the finite-sample correction
// t = d * (sqrt(n) + 0.12 + 0.11 / sqrt(n)).
double ks_pvalue(double d, std::size_t n);

// Two-sample KS statistic and asymptotic p-value.
struct TwoSampleKs {
  double statistic;
  double p_value;
};
TwoSampleKs ks_two_sample(std::vector<double> xs, std::vector<double> ys);

double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Ranks starting at 1; ties get the average rank.
std::vector<double> average_ranks(const std::vector<double>& x);
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// d^T (A + ridge I)^{-1} d for symmetric PSD A (row major n x n) via
// Cholesky. ridge >= 0; zero is fine for positive definite A. When a pivot
// fails the ridge is escalated tenfold (from 1e-12 if it was zero), so
// mildly indefinite inputs from rounding still solve deterministically.
double ridged_quadform(std::vector<double> a, std::size_t n, double ridge,
                       const std::vector<double>& d);

double mean(const std::vector<double>& xs);

}  // namespace ppdepth::stats
