#include "ppdepth/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ppdepth/error.hpp"

namespace ppdepth::stats {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.141592653589793238462643383279502884;
}  // namespace

double log_poisson_pmf(long long k, double lambda) {
  if (k < 0) return -kInf;
  if (lambda == 0.0) return k == 0 ? 0.0 : -kInf;
  const double kd = static_cast<double>(k);
  return kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0);
}

double poisson_pmf(long long k, double lambda) {
  const double ll = log_poisson_pmf(k, lambda);
  return ll == -kInf ? 0.0 : std::exp(ll);
}

double logsumexp(const std::vector<double>& xs) {
  double m = -kInf;
  for (double x : xs) m = std::max(m, x);
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

namespace {

// Continued fraction for the incomplete beta, modified Lentz iteration.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    raise(ErrorCode::invalid_argument, "incomplete beta requires a, b > 0");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double lbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                     a * std::log(x) + b * std::log1p(-x);
  const double bt = std::exp(lbt);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return bt * betacf(a, b, x) / a;
  }
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double kolmogorov_q(double t) {
  if (!(t > 0.0)) return 1.0;
  if (t < 1.18) {
    // Jacobi theta form; three odd terms already reach double precision here.
    const double v = kPi * kPi / (8.0 * t * t);
    double s = 0.0;
    for (int j = 1; j <= 9; j += 2) {
      s += std::exp(-static_cast<double>(j) * j * v);
    }
    const double q = 1.0 - std::sqrt(2.0 * kPi) / t * s;
    return std::clamp(q, 0.0, 1.0);
  }
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * static_cast<double>(j) * j * t * t);
    s += (j % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

double ks_statistic_uniform(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return ks_statistic(values, [](double u) { return std::clamp(u, 0.0, 1.0); });
}

double ks_statistic(const std::vector<double>& sorted,
                    const std::function<double(double)>& cdf) {
  const std::size_t n = sorted.size();
  if (n == 0) {
    raise(ErrorCode::empty_realization, "KS statistic needs at least one value");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted[i]);
    const double hi = static_cast<double>(i + 1) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double t = d * (sn + 0.12 + 0.11 / sn);
  return kolmogorov_q(t);
}

TwoSampleKs ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
  if (xs.empty() || ys.empty()) {
    raise(ErrorCode::empty_realization, "two-sample KS needs nonempty samples");
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const std::size_t n = xs.size();
  const std::size_t m = ys.size();
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < n && j < m) {
    const double v = std::min(xs[i], ys[j]);
    while (i < n && xs[i] <= v) ++i;
    while (j < m && ys[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n -
                             static_cast<double>(j) / m));
  }
  const double en = std::sqrt(static_cast<double>(n) * m / (n + m));
  // Asymptotic two-sample correction from the classical treatment.
  const double t = (en + 0.12 + 0.11 / en) * d;
  return {d, kolmogorov_q(t)};
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    raise(ErrorCode::dimension_mismatch,
          "correlation needs two equal-length samples of size >= 2");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> average_ranks(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(average_ranks(x), average_ranks(y));
}

double ridged_quadform(std::vector<double> a, std::size_t n, double ridge,
                       const std::vector<double>& d) {
  if (a.size() != n * n || d.size() != n) {
    raise(ErrorCode::dimension_mismatch, "quadratic form size mismatch");
  }
  if (!std::isfinite(ridge) || ridge < 0.0) {
    raise(ErrorCode::invalid_argument, "ridge must be finite and >= 0");
  }
  if (n == 0) return 0.0;

  const std::vector<double> original = a;
  for (int attempt = 0; attempt < 60; ++attempt) {
    a = original;
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] += ridge;

    // In-place lower Cholesky.
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double s = a[i * n + j];
        for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
        if (i == j) {
          if (!(s > 0.0)) {
            ok = false;
            break;
          }
          a[i * n + i] = std::sqrt(s);
        } else {
          a[i * n + j] = s / a[j * n + j];
        }
      }
    }
    if (!ok) {
      ridge = ridge > 0.0 ? ridge * 10.0 : 1e-12;
      continue;
    }

    // Forward solve L y = d; the quadratic form is |y|^2.
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = d[i];
      for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * y[k];
      y[i] = s / a[i * n + i];
    }
    double q = 0.0;
    for (double v : y) q += v * v;
    return q;
  }
  raise(ErrorCode::invalid_argument,
        "covariance is not positive definite even after ridge escalation");
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) {
    raise(ErrorCode::invalid_argument, "mean of empty sample");
  }
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace ppdepth::stats
