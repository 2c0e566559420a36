#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ppdepth/types.hpp"

namespace ppdepth::rescale {

// Nonnegative intensity on a grid plus its piecewise-linear cumulative
// integral. Both lambda and Lambda interpolate linearly between nodes;
// Lambda(t1) = 0 always. Lambda(t2) = 0 is constructible (identically zero
// intensity); consumers that need mass raise invalid_intensity.
class IntensityModel {
 public:
  // Grid intensity; cumulative built by the trapezoid rule.
  static IntensityModel from_grid(std::vector<double> ts,
                                  std::vector<double> lambdas);

  // Authoritative cumulative (nondecreasing, starting at 0); node lambdas
  // are derived as centered finite-difference slopes.
  static IntensityModel from_cumulative(std::vector<double> ts,
                                        std::vector<double> cumulative);

  // Verbatim reload of a serialized model; validates consistency only.
  static IntensityModel from_arrays(std::vector<double> ts,
                                    std::vector<double> lambdas,
                                    std::vector<double> cumulative);

  const TimeDomain& domain() const noexcept { return domain_; }
  double total() const noexcept { return cumulative_.back(); }
  double lambda_at(double t) const;
  double cumulative_at(double t) const;
  // Smallest t with Lambda(t) = y; flat stretches resolve to their left edge.
  double inverse_cumulative(double y) const;
  double max_lambda() const noexcept;

  const std::vector<double>& grid_times() const noexcept { return ts_; }
  const std::vector<double>& grid_lambdas() const noexcept { return lambdas_; }
  const std::vector<double>& grid_cumulative() const noexcept {
    return cumulative_;
  }

 private:
  IntensityModel(std::vector<double> ts, std::vector<double> lambdas,
                 std::vector<double> cumulative);

  TimeDomain domain_;
  std::vector<double> ts_;
  std::vector<double> lambdas_;
  std::vector<double> cumulative_;
};

// Pooled histogram of event times scaled to intensity units, then smoothed
// with a normalized Gaussian kernel on the bin centers.
// bins = 0 picks max(10, sqrt(total event count)); bandwidth <= 0 picks
// twice the bin width.
IntensityModel estimate_intensity(const Dataset& data, std::size_t bins = 0,
                                  double bandwidth = 0.0);

// Map events through Lambda and normalize to [0, 1].
Realization rescale(const Realization& s, const IntensityModel& m);

// Depth of s after rescaling: (k+1) prod_i (dLambda_i / Lambda(T2))^(1/(k+1)).
// Evaluated in the log domain; any zero rescaled gap gives exactly 0.
double ts_conditional_depth(const Realization& s, const IntensityModel& m);

// Two-column "t lambda" text, ascending in t, '#' comments.
IntensityModel intensity_from_text(std::string_view text);
std::string intensity_to_text(const IntensityModel& m);
IntensityModel read_intensity_file(const std::string& path);
void write_intensity_file(const std::string& path, const IntensityModel& m);

}  // namespace ppdepth::rescale
