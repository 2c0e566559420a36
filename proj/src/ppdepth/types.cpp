#include "ppdepth/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ppdepth/textio.hpp"

namespace ppdepth {

TimeDomain::TimeDomain(double t1_, double t2_) : t1(t1_), t2(t2_) {
  if (!std::isfinite(t1) || !std::isfinite(t2) || !(t1 < t2)) {
    raise(ErrorCode::invalid_argument,
          "time domain requires finite t1 < t2, got [" + format_double(t1_) +
              ", " + format_double(t2_) + "]");
  }
}

Realization::Realization(TimeDomain domain, std::vector<double> events)
    : domain_(domain), events_(std::move(events)) {
  double prev = domain_.t1;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const double t = events_[i];
    if (!std::isfinite(t) || t < domain_.t1 || t > domain_.t2) {
      raise(ErrorCode::invalid_argument,
            "event " + format_double(t) + " outside domain [" +
                format_double(domain_.t1) + ", " + format_double(domain_.t2) +
                "]");
    }
    if (t < prev) {
      raise(ErrorCode::invalid_argument,
            "event times must be nondecreasing, violated at position " +
                std::to_string(i));
    }
    prev = t;
  }
}

IetVector::IetVector(TimeDomain domain, std::vector<double> gaps)
    : domain_(domain), gaps_(std::move(gaps)) {
  if (gaps_.empty()) {
    raise(ErrorCode::invalid_argument, "gap vector must have k+1 >= 1 entries");
  }
  double sum = 0.0;
  for (double g : gaps_) {
    if (!std::isfinite(g) || g < 0.0) {
      raise(ErrorCode::invalid_argument,
            "gaps must be finite and nonnegative, got " + format_double(g));
    }
    sum += g;
  }
  const double span = domain_.span();
  if (std::abs(sum - span) > 1e-9 * span) {
    raise(ErrorCode::invalid_argument,
          "gaps sum to " + format_double(sum) + ", expected span " +
              format_double(span));
  }
}

bool IetVector::is_boundary() const noexcept {
  return std::any_of(gaps_.begin(), gaps_.end(),
                     [](double g) { return g == 0.0; });
}

void Dataset::add(Realization r) {
  if (!(r.domain() == domain_)) {
    raise(ErrorCode::domain_mismatch,
          "realization domain differs from dataset domain");
  }
  if (labeled()) {
    raise(ErrorCode::invalid_argument,
          "cannot add an unlabeled realization to a labeled dataset");
  }
  realizations_.push_back(std::move(r));
}

void Dataset::add(Realization r, std::string label) {
  if (!(r.domain() == domain_)) {
    raise(ErrorCode::domain_mismatch,
          "realization domain differs from dataset domain");
  }
  if (!realizations_.empty() && !labeled()) {
    raise(ErrorCode::invalid_argument,
          "cannot add a labeled realization to an unlabeled dataset");
  }
  if (label.empty() ||
      label.find_first_of(" \t\r\n#") != std::string::npos) {
    raise(ErrorCode::invalid_argument,
          "labels must be nonempty and free of whitespace and '#'");
  }
  realizations_.push_back(std::move(r));
  labels_.push_back(std::move(label));
}

std::vector<std::string> Dataset::class_labels() const {
  std::set<std::string> uniq(labels_.begin(), labels_.end());
  return std::vector<std::string>(uniq.begin(), uniq.end());
}

IetVector to_iet(const Realization& s) {
  const auto& ev = s.events();
  std::vector<double> gaps;
  gaps.reserve(ev.size() + 1);
  double prev = s.domain().t1;
  for (double t : ev) {
    gaps.push_back(t - prev);
    prev = t;
  }
  gaps.push_back(s.domain().t2 - prev);
  return IetVector(s.domain(), std::move(gaps));
}

Realization from_iet(const IetVector& u) {
  const auto& gaps = u.gaps();
  std::vector<double> events;
  events.reserve(gaps.size() - 1);
  double t = u.domain().t1;
  for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
    t += gaps[i];
    // Accumulated rounding may overshoot the window by an ulp.
    t = std::min(t, u.domain().t2);
    events.push_back(t);
  }
  return Realization(u.domain(), std::move(events));
}

}  // namespace ppdepth
