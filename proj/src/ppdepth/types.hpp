#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ppdepth/error.hpp"

namespace ppdepth {

// Closed observation window [t1, t2], t1 < t2.
struct TimeDomain {
  double t1;
  double t2;

  TimeDomain(double t1_, double t2_);
  double span() const noexcept { return t2 - t1; }
  bool operator==(const TimeDomain&) const = default;
};

// One observed point process: nondecreasing event times inside the window.
// Tied events and events at the endpoints are legal input; they sit on the
// simplex boundary and score depth zero downstream.
class Realization {
 public:
  Realization(TimeDomain domain, std::vector<double> events);

  const TimeDomain& domain() const noexcept { return domain_; }
  const std::vector<double>& events() const noexcept { return events_; }
  std::size_t cardinality() const noexcept { return events_.size(); }
  bool operator==(const Realization&) const = default;

 private:
  TimeDomain domain_;
  std::vector<double> events_;
};

// Inter-event gaps, k+1 of them with the window endpoints as sentinels.
// Lives on the scaled simplex { g_i >= 0, sum g_i = span }.
class IetVector {
 public:
  IetVector(TimeDomain domain, std::vector<double> gaps);

  const TimeDomain& domain() const noexcept { return domain_; }
  const std::vector<double>& gaps() const noexcept { return gaps_; }

  // True iff some gap is exactly zero: a tie or an endpoint event.
  bool is_boundary() const noexcept;

 private:
  TimeDomain domain_;
  std::vector<double> gaps_;
};

// Realizations sharing one window, optionally labeled. Labels are
// all-or-none: a dataset is either fully labeled or fully unlabeled.
class Dataset {
 public:
  explicit Dataset(TimeDomain domain) : domain_(domain) {}

  void add(Realization r);
  void add(Realization r, std::string label);

  const TimeDomain& domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return realizations_.size(); }
  bool empty() const noexcept { return realizations_.empty(); }
  const Realization& at(std::size_t i) const { return realizations_.at(i); }
  const std::vector<Realization>& realizations() const noexcept {
    return realizations_;
  }

  bool labeled() const noexcept { return !labels_.empty(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  // Sorted unique labels; empty for unlabeled datasets.
  std::vector<std::string> class_labels() const;

 private:
  TimeDomain domain_;
  std::vector<Realization> realizations_;
  std::vector<std::string> labels_;
};

IetVector to_iet(const Realization& s);
Realization from_iet(const IetVector& u);

}  // namespace ppdepth
