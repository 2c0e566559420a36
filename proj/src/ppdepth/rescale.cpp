#include "ppdepth/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ppdepth/textio.hpp"

namespace ppdepth::rescale {

namespace {

void validate_grid_times(const std::vector<double>& ts) {
  if (ts.size() < 2) {
    raise(ErrorCode::invalid_argument, "intensity grid needs >= 2 nodes");
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!std::isfinite(ts[i]) || (i > 0 && !(ts[i] > ts[i - 1]))) {
      raise(ErrorCode::invalid_argument,
            "intensity grid times must be finite and strictly increasing");
    }
  }
}

// Index of the grid cell containing t, clamped to valid cells.
std::size_t cell_index(const std::vector<double>& ts, double t) {
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - ts.begin());
  if (hi == 0) return 0;
  if (hi >= ts.size()) return ts.size() - 2;
  return hi - 1;
}

double lerp_at(const std::vector<double>& ts, const std::vector<double>& vs,
               double t) {
  const std::size_t i = cell_index(ts, t);
  const double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
  return vs[i] + w * (vs[i + 1] - vs[i]);
}

}  // namespace

IntensityModel::IntensityModel(std::vector<double> ts,
                               std::vector<double> lambdas,
                               std::vector<double> cumulative)
    : domain_(ts.front(), ts.back()),
      ts_(std::move(ts)),
      lambdas_(std::move(lambdas)),
      cumulative_(std::move(cumulative)) {}

IntensityModel IntensityModel::from_grid(std::vector<double> ts,
                                         std::vector<double> lambdas) {
  validate_grid_times(ts);
  if (lambdas.size() != ts.size()) {
    raise(ErrorCode::invalid_argument, "intensity grid arrays differ in size");
  }
  for (double l : lambdas) {
    if (!std::isfinite(l) || l < 0.0) {
      raise(ErrorCode::invalid_intensity,
            "intensity values must be finite and nonnegative");
    }
  }
  std::vector<double> cum(ts.size());
  cum[0] = 0.0;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    cum[i] = cum[i - 1] +
             0.5 * (lambdas[i - 1] + lambdas[i]) * (ts[i] - ts[i - 1]);
  }
  return IntensityModel(std::move(ts), std::move(lambdas), std::move(cum));
}

IntensityModel IntensityModel::from_cumulative(std::vector<double> ts,
                                               std::vector<double> cumulative) {
  validate_grid_times(ts);
  if (cumulative.size() != ts.size()) {
    raise(ErrorCode::invalid_argument, "cumulative grid arrays differ in size");
  }
  if (cumulative.front() != 0.0) {
    raise(ErrorCode::invalid_argument, "cumulative intensity must start at 0");
  }
  for (std::size_t i = 1; i < cumulative.size(); ++i) {
    if (!std::isfinite(cumulative[i]) || cumulative[i] < cumulative[i - 1]) {
      raise(ErrorCode::invalid_argument,
            "cumulative intensity must be finite and nondecreasing");
    }
  }
  const std::size_t n = ts.size();
  std::vector<double> lambdas(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    lambdas[i] = (cumulative[hi] - cumulative[lo]) / (ts[hi] - ts[lo]);
  }
  return IntensityModel(std::move(ts), std::move(lambdas),
                        std::move(cumulative));
}

IntensityModel IntensityModel::from_arrays(std::vector<double> ts,
                                           std::vector<double> lambdas,
                                           std::vector<double> cumulative) {
  validate_grid_times(ts);
  if (lambdas.size() != ts.size() || cumulative.size() != ts.size()) {
    raise(ErrorCode::invalid_argument, "intensity arrays differ in size");
  }
  if (cumulative.front() != 0.0) {
    raise(ErrorCode::invalid_argument, "cumulative intensity must start at 0");
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!std::isfinite(lambdas[i]) || lambdas[i] < 0.0) {
      raise(ErrorCode::invalid_intensity,
            "intensity values must be finite and nonnegative");
    }
    if (i > 0 && (!std::isfinite(cumulative[i]) ||
                  cumulative[i] < cumulative[i - 1])) {
      raise(ErrorCode::invalid_argument,
            "cumulative intensity must be finite and nondecreasing");
    }
  }
  return IntensityModel(std::move(ts), std::move(lambdas),
                        std::move(cumulative));
}

double IntensityModel::lambda_at(double t) const {
  const double v = lerp_at(ts_, lambdas_, t);
  return v < 0.0 ? 0.0 : v;
}

double IntensityModel::cumulative_at(double t) const {
  if (t <= ts_.front()) return 0.0;
  if (t >= ts_.back()) return cumulative_.back();
  return lerp_at(ts_, cumulative_, t);
}

double IntensityModel::inverse_cumulative(double y) const {
  y = std::clamp(y, 0.0, cumulative_.back());
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), y);
  std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
  if (i == 0) return ts_.front();
  if (cumulative_[i] == y) return ts_[i];
  --i;
  const double rise = cumulative_[i + 1] - cumulative_[i];
  if (rise == 0.0) return ts_[i];
  const double w = (y - cumulative_[i]) / rise;
  return ts_[i] + w * (ts_[i + 1] - ts_[i]);
}

double IntensityModel::max_lambda() const noexcept {
  return *std::max_element(lambdas_.begin(), lambdas_.end());
}

IntensityModel estimate_intensity(const Dataset& data, std::size_t bins,
                                  double bandwidth) {
  if (data.empty()) {
    raise(ErrorCode::empty_dataset, "intensity estimation needs data");
  }
  std::size_t total_events = 0;
  for (const auto& r : data.realizations()) total_events += r.cardinality();
  if (total_events == 0) {
    raise(ErrorCode::insufficient_data,
          "intensity estimation needs at least one event");
  }
  if (bins == 0) {
    bins = std::max<std::size_t>(
        10, static_cast<std::size_t>(
                std::lround(std::sqrt(static_cast<double>(total_events)))));
  }
  if (bins < 2) {
    raise(ErrorCode::invalid_argument, "intensity estimation needs >= 2 bins");
  }

  const TimeDomain& dom = data.domain();
  const double width = dom.span() / static_cast<double>(bins);
  if (bandwidth <= 0.0) bandwidth = 2.0 * width;

  std::vector<double> counts(bins, 0.0);
  for (const auto& r : data.realizations()) {
    for (double t : r.events()) {
      auto b = static_cast<std::size_t>((t - dom.t1) / width);
      if (b >= bins) b = bins - 1;  // t == t2 falls into the last bin
      counts[b] += 1.0;
    }
  }

  const double n = static_cast<double>(data.size());
  std::vector<double> centers(bins);
  std::vector<double> raw(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    centers[b] = dom.t1 + (static_cast<double>(b) + 0.5) * width;
    raw[b] = counts[b] / (n * width);
  }

  // Normalized Gaussian kernel smoother over the bin centers.
  std::vector<double> smooth(bins, 0.0);
  for (std::size_t j = 0; j < bins; ++j) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
      const double z = (centers[j] - centers[b]) / bandwidth;
      const double w = std::exp(-0.5 * z * z);
      num += w * raw[b];
      den += w;
    }
    smooth[j] = num / den;
  }

  std::vector<double> ts;
  std::vector<double> ls;
  ts.reserve(bins + 2);
  ls.reserve(bins + 2);
  ts.push_back(dom.t1);
  ls.push_back(smooth.front());
  for (std::size_t b = 0; b < bins; ++b) {
    ts.push_back(centers[b]);
    ls.push_back(smooth[b]);
  }
  ts.push_back(dom.t2);
  ls.push_back(smooth.back());
  return IntensityModel::from_grid(std::move(ts), std::move(ls));
}

Realization rescale(const Realization& s, const IntensityModel& m) {
  if (!(s.domain() == m.domain())) {
    raise(ErrorCode::domain_mismatch,
          "realization and intensity domains differ");
  }
  const double total = m.total();
  if (!(total > 0.0)) {
    raise(ErrorCode::invalid_intensity,
          "cumulative intensity is zero over the window");
  }
  std::vector<double> out;
  out.reserve(s.cardinality());
  double prev = 0.0;
  for (double t : s.events()) {
    double v = m.cumulative_at(t) / total;
    v = std::clamp(v, prev, 1.0);
    out.push_back(v);
    prev = v;
  }
  return Realization(TimeDomain(0.0, 1.0), std::move(out));
}

double ts_conditional_depth(const Realization& s, const IntensityModel& m) {
  if (!(s.domain() == m.domain())) {
    raise(ErrorCode::domain_mismatch,
          "realization and intensity domains differ");
  }
  const double total = m.total();
  if (!(total > 0.0)) {
    raise(ErrorCode::invalid_intensity,
          "cumulative intensity is zero over the window");
  }
  const std::size_t k = s.cardinality();
  if (k == 0) return 1.0;

  const double inv = 1.0 / static_cast<double>(k + 1);
  double prev = 0.0;
  double log_sum = 0.0;
  for (std::size_t i = 0; i <= k; ++i) {
    const double cur =
        i < k ? m.cumulative_at(s.events()[i]) : total;
    const double gap = cur - prev;
    if (!(gap > 0.0)) return 0.0;
    log_sum += inv * std::log(gap / total);
    prev = cur;
  }
  const double d =
      std::exp(std::log(static_cast<double>(k + 1)) + log_sum);
  return std::min(d, 1.0);
}

IntensityModel intensity_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  std::vector<double> ts;
  std::vector<double> ls;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto pos = line.find('#'); pos != std::string_view::npos) {
      line = line.substr(0, pos);
    }
    std::istringstream fields{std::string(line)};
    std::string ta;
    std::string la;
    if (!(fields >> ta)) continue;  // blank or comment-only line
    if (!(fields >> la)) {
      raise(ErrorCode::parse_error,
            "line " + std::to_string(line_no) + ": expected 't lambda'");
    }
    std::string extra;
    if (fields >> extra) {
      raise(ErrorCode::parse_error,
            "line " + std::to_string(line_no) + ": trailing token '" + extra +
                "'");
    }
    auto t = parse_double(ta);
    auto l = parse_double(la);
    if (!t || !l) {
      raise(ErrorCode::parse_error,
            "line " + std::to_string(line_no) + ": bad numeric token");
    }
    ts.push_back(*t);
    ls.push_back(*l);
  }
  if (ts.size() < 2) {
    raise(ErrorCode::parse_error, "intensity file needs >= 2 grid rows");
  }
  return IntensityModel::from_grid(std::move(ts), std::move(ls));
}

std::string intensity_to_text(const IntensityModel& m) {
  std::string out;
  for (std::size_t i = 0; i < m.grid_times().size(); ++i) {
    out += format_double(m.grid_times()[i]);
    out += ' ';
    out += format_double(m.grid_lambdas()[i]);
    out += '\n';
  }
  return out;
}

IntensityModel read_intensity_file(const std::string& path) {
  return intensity_from_text(read_text_file(path));
}

void write_intensity_file(const std::string& path, const IntensityModel& m) {
  write_text_file(path, intensity_to_text(m));
}

}  // namespace ppdepth::rescale
