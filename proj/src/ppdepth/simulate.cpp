#include "ppdepth/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "ppdepth/rng.hpp"
#include "ppdepth/textio.hpp"

namespace ppdepth::simulate {

WarpFunction::WarpFunction(std::vector<double> ts, std::vector<double> gammas)
    : domain_(ts.empty() ? TimeDomain(0.0, 1.0)
                         : TimeDomain(ts.front(), ts.back())),
      ts_(std::move(ts)),
      gammas_(std::move(gammas)) {
  if (ts_.size() < 2 || gammas_.size() != ts_.size()) {
    raise(ErrorCode::invalid_argument,
          "warp grid needs >= 2 nodes and equal-length arrays");
  }
  for (std::size_t i = 1; i < ts_.size(); ++i) {
    if (!(ts_[i] > ts_[i - 1]) || !(gammas_[i] > gammas_[i - 1])) {
      raise(ErrorCode::invalid_argument,
            "warp grid must be strictly increasing in both coordinates");
    }
  }
  if (gammas_.front() != ts_.front() || gammas_.back() != ts_.back()) {
    raise(ErrorCode::invalid_argument,
          "warp must preserve the domain endpoints");
  }
}

WarpFunction WarpFunction::from_function(
    const TimeDomain& domain, const std::function<double(double)>& f,
    std::size_t nodes) {
  if (nodes < 2) {
    raise(ErrorCode::invalid_argument, "warp grid needs >= 2 nodes");
  }
  std::vector<double> ts(nodes);
  std::vector<double> gs(nodes);
  const double h = domain.span() / static_cast<double>(nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) {
    ts[i] = domain.t1 + static_cast<double>(i) * h;
    gs[i] = f(ts[i]);
  }
  ts.front() = domain.t1;
  ts.back() = domain.t2;
  gs.front() = domain.t1;
  gs.back() = domain.t2;
  return WarpFunction(std::move(ts), std::move(gs));
}

double WarpFunction::operator()(double t) const {
  if (t <= ts_.front()) return gammas_.front();
  if (t >= ts_.back()) return gammas_.back();
  auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - ts_.begin()) - 1;
  const double w = (t - ts_[i]) / (ts_[i + 1] - ts_[i]);
  return gammas_[i] + w * (gammas_[i + 1] - gammas_[i]);
}

WarpFunction WarpFunction::inverse() const {
  return WarpFunction(gammas_, ts_);
}

namespace {

Realization sample_hpp_with(std::mt19937_64& gen, double rate,
                            const TimeDomain& domain) {
  std::poisson_distribution<long long> count_dist(rate * domain.span());
  const long long count = count_dist(gen);
  std::uniform_real_distribution<double> time_dist(domain.t1, domain.t2);
  std::vector<double> events(static_cast<std::size_t>(count));
  for (auto& t : events) t = time_dist(gen);
  std::sort(events.begin(), events.end());
  return Realization(domain, std::move(events));
}

Realization sample_ipp_with(std::mt19937_64& gen,
                            const rescale::IntensityModel& intensity) {
  const double lam_max = intensity.max_lambda();
  Realization candidates =
      sample_hpp_with(gen, lam_max, intensity.domain());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> events;
  events.reserve(candidates.cardinality());
  for (double t : candidates.events()) {
    if (u(gen) * lam_max <= intensity.lambda_at(t)) events.push_back(t);
  }
  return Realization(intensity.domain(), std::move(events));
}

void check_rate(double rate) {
  if (!std::isfinite(rate) || !(rate > 0.0)) {
    raise(ErrorCode::invalid_rate,
          "rate must be positive and finite, got " + format_double(rate));
  }
}

void check_intensity(const rescale::IntensityModel& intensity) {
  if (!(intensity.max_lambda() > 0.0)) {
    raise(ErrorCode::invalid_intensity,
          "intensity is zero everywhere on the grid");
  }
}

}  // namespace

Realization sample_hpp(double rate, const TimeDomain& domain,
                       std::uint64_t seed) {
  check_rate(rate);
  auto gen = substream(seed, 0);
  return sample_hpp_with(gen, rate, domain);
}

Dataset sample_hpp_many(double rate, const TimeDomain& domain, std::size_t n,
                        std::uint64_t seed) {
  check_rate(rate);
  Dataset out(domain);
  for (std::size_t i = 0; i < n; ++i) {
    auto gen = substream(seed, i);
    out.add(sample_hpp_with(gen, rate, domain));
  }
  return out;
}

Realization sample_ipp(const rescale::IntensityModel& intensity,
                       std::uint64_t seed) {
  check_intensity(intensity);
  auto gen = substream(seed, 0);
  return sample_ipp_with(gen, intensity);
}

Dataset sample_ipp_many(const rescale::IntensityModel& intensity,
                        std::size_t n, std::uint64_t seed) {
  check_intensity(intensity);
  Dataset out(intensity.domain());
  for (std::size_t i = 0; i < n; ++i) {
    auto gen = substream(seed, i);
    out.add(sample_ipp_with(gen, intensity));
  }
  return out;
}

Realization apply_warp(const Realization& s, const WarpFunction& gamma) {
  if (!(s.domain() == gamma.domain())) {
    raise(ErrorCode::domain_mismatch,
          "realization and warp domains differ");
  }
  std::vector<double> out;
  out.reserve(s.cardinality());
  double prev = s.domain().t1;
  for (double t : s.events()) {
    double v = gamma(t);
    v = std::clamp(v, prev, s.domain().t2);
    out.push_back(v);
    prev = v;
  }
  return Realization(s.domain(), std::move(out));
}

}  // namespace ppdepth::simulate
