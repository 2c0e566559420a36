#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ppdepth/rescale.hpp"
#include "ppdepth/types.hpp"

namespace ppdepth::simulate {

// Endpoint-preserving, strictly increasing time reparameterization stored
// as a grid; evaluation between nodes is monotone piecewise-linear.
class WarpFunction {
 public:
  WarpFunction(std::vector<double> ts, std::vector<double> gammas);

  // Sample f at `nodes` uniform grid points; endpoints are pinned exactly.
  static WarpFunction from_function(const TimeDomain& domain,
                                    const std::function<double(double)>& f,
                                    std::size_t nodes = 1024);

  const TimeDomain& domain() const noexcept { return domain_; }
  double operator()(double t) const;

  // Swapped grid; exact inverse at the nodes.
  WarpFunction inverse() const;

  const std::vector<double>& grid_times() const noexcept { return ts_; }
  const std::vector<double>& grid_values() const noexcept { return gammas_; }

 private:
  TimeDomain domain_;
  std::vector<double> ts_;
  std::vector<double> gammas_;
};

// Homogeneous Poisson process: count ~ Poisson(rate * span), event times
// i.i.d. uniform, sorted. Pure function of (parameters, seed).
Realization sample_hpp(double rate, const TimeDomain& domain,
                       std::uint64_t seed);

// n independent realizations; realization i uses substream(seed, i), so the
// prefix of a larger batch equals the smaller batch.
Dataset sample_hpp_many(double rate, const TimeDomain& domain, std::size_t n,
                        std::uint64_t seed);

// Inhomogeneous Poisson process by thinning a homogeneous candidate stream
// at the grid maximum of lambda.
Realization sample_ipp(const rescale::IntensityModel& intensity,
                       std::uint64_t seed);
Dataset sample_ipp_many(const rescale::IntensityModel& intensity,
                        std::size_t n, std::uint64_t seed);

Realization apply_warp(const Realization& s, const WarpFunction& gamma);

}  // namespace ppdepth::simulate
