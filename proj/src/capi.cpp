// C shim over the core library. Every entry point catches, records the
// message in a thread-local slot, and maps the error class to a status.

#include "ppdepth/ppdepth.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "ppdepth/analysis.hpp"
#include "ppdepth/cardinality.hpp"
#include "ppdepth/dataset_io.hpp"
#include "ppdepth/depth.hpp"
#include "ppdepth/error.hpp"
#include "ppdepth/rescale.hpp"
#include "ppdepth/serialize.hpp"
#include "ppdepth/simulate.hpp"
#include "ppdepth/stats.hpp"
#include "ppdepth/types.hpp"

struct ppd_dataset {
  ppdepth::Dataset impl;
};
struct ppd_intensity {
  ppdepth::rescale::IntensityModel impl;
};
struct ppd_model {
  ppdepth::depth::DepthModel impl;
};
struct ppd_classifier {
  ppdepth::analysis::DepthClassifier impl;
};
struct ppd_likelihood {
  ppdepth::analysis::LikelihoodClassifier impl;
};

namespace {

thread_local std::string g_last_error = "no error";

ppd_status record(ppd_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

ppd_status map_error(const ppdepth::Error& e) {
  switch (e.code()) {
    case ppdepth::ErrorCode::parse_error:
      return record(PPD_ERROR_PARSE, e.what());
    case ppdepth::ErrorCode::io_error:
      return record(PPD_ERROR_IO, e.what());
    default:
      return record(PPD_ERROR_VALIDATION, e.what());
  }
}

// Runs the body and funnels every throw into a status code.
template <typename Fn>
ppd_status guarded(Fn&& fn) {
  try {
    fn();
    return PPD_OK;
  } catch (const ppdepth::Error& e) {
    return map_error(e);
  } catch (const std::bad_alloc&) {
    return record(PPD_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(PPD_ERROR_INTERNAL, e.what());
  } catch (...) {
    return record(PPD_ERROR_INTERNAL, "unknown failure");
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) {
    ppdepth::raise(ppdepth::ErrorCode::invalid_argument,
                   std::string(name) + " must not be NULL");
  }
}

std::vector<double> copy_events(const double* events, size_t n) {
  if (n > 0) require(events, "events");
  return std::vector<double>(events, events + n);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ppdepth::depth::ConditionalKind parse_kind(const char* kind) {
  require(kind, "kind");
  const std::string k(kind);
  if (k == "hpp") return ppdepth::depth::ConditionalKind::hpp;
  if (k == "sample-dirichlet") {
    return ppdepth::depth::ConditionalKind::sample_dirichlet;
  }
  if (k == "ts-dirichlet") {
    return ppdepth::depth::ConditionalKind::ts_dirichlet;
  }
  if (k == "mahalanobis") {
    return ppdepth::depth::ConditionalKind::mahalanobis;
  }
  ppdepth::raise(ppdepth::ErrorCode::invalid_argument,
                 "unknown conditional kind '" + k +
                     "'; expected hpp, sample-dirichlet, ts-dirichlet or "
                     "mahalanobis");
}

ppdepth::cardinality::CardinalityModel fit_cardinality(
    const ppdepth::Dataset& data, const ppd_fit_options& opts) {
  require(opts.cardinality, "cardinality");
  const std::vector<long long> counts =
      ppdepth::cardinality::dataset_counts(data);
  const std::string c(opts.cardinality);
  if (c == "empirical") {
    return ppdepth::cardinality::fit_empirical(counts, opts.cap);
  }
  if (c == "poisson") {
    return ppdepth::cardinality::fit_poisson_mle(counts, opts.cap);
  }
  if (c == "mixture") {
    if (opts.mixture_components > 0) {
      return ppdepth::cardinality::fit_poisson_mixture_em(
          counts, opts.mixture_components, opts.cap, 1e-8, 500, opts.seed);
    }
    return ppdepth::cardinality::fit_poisson_mixture_bic(
        counts, 5, opts.cap, 1e-8, 500, opts.seed);
  }
  ppdepth::raise(ppdepth::ErrorCode::invalid_argument,
                 "unknown cardinality fit '" + c +
                     "'; expected empirical, poisson or mixture");
}

ppd_score to_score(const ppdepth::analysis::RankEntry& e) {
  return ppd_score{e.index,       e.cardinality, e.weight,
                   e.conditional, e.depth,       e.missing_row ? 1 : 0};
}

ppd_status export_scores(std::vector<ppdepth::analysis::RankEntry> entries,
                         ppd_score** out_scores, size_t* out_len) {
  auto* scores = new ppd_score[entries.empty() ? 1 : entries.size()];
  for (size_t i = 0; i < entries.size(); ++i) scores[i] = to_score(entries[i]);
  *out_scores = scores;
  *out_len = entries.size();
  return PPD_OK;
}

}  // namespace

extern "C" {

const char* ppd_last_error(void) { return g_last_error.c_str(); }

const char* ppd_library_version(void) { return "0.1.0"; }

void ppd_string_free(char* s) { delete[] s; }

/* Datasets ---------------------------------------------------------- */

ppd_status ppd_dataset_create(double t1, double t2, ppd_dataset** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ppd_dataset{ppdepth::Dataset(ppdepth::TimeDomain(t1, t2))};
  });
}

ppd_status ppd_dataset_add(ppd_dataset* d, const double* events,
                           size_t n_events, const char* label_or_null) {
  return guarded([&] {
    require(d, "dataset");
    ppdepth::Realization r(d->impl.domain(), copy_events(events, n_events));
    if (label_or_null) {
      d->impl.add(std::move(r), label_or_null);
    } else {
      d->impl.add(std::move(r));
    }
  });
}

ppd_status ppd_dataset_parse(const char* text, double t1, double t2,
                             ppd_dataset** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new ppd_dataset{
        ppdepth::parse_dataset(text, ppdepth::TimeDomain(t1, t2))};
  });
}

ppd_status ppd_dataset_read_file(const char* path, double t1, double t2,
                                 ppd_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ppd_dataset{
        ppdepth::read_dataset_file(path, ppdepth::TimeDomain(t1, t2))};
  });
}

ppd_status ppd_dataset_render(const ppd_dataset* d, char** out_text) {
  return guarded([&] {
    require(d, "dataset");
    require(out_text, "out_text");
    *out_text = dup_string(ppdepth::render_dataset(d->impl));
  });
}

ppd_status ppd_dataset_write_file(const ppd_dataset* d, const char* path) {
  return guarded([&] {
    require(d, "dataset");
    require(path, "path");
    ppdepth::write_dataset_file(path, d->impl);
  });
}

ppd_status ppd_dataset_size(const ppd_dataset* d, size_t* out) {
  return guarded([&] {
    require(d, "dataset");
    require(out, "out");
    *out = d->impl.size();
  });
}

ppd_status ppd_dataset_domain(const ppd_dataset* d, double* t1, double* t2) {
  return guarded([&] {
    require(d, "dataset");
    require(t1, "t1");
    require(t2, "t2");
    *t1 = d->impl.domain().t1;
    *t2 = d->impl.domain().t2;
  });
}

ppd_status ppd_dataset_labeled(const ppd_dataset* d, int* out) {
  return guarded([&] {
    require(d, "dataset");
    require(out, "out");
    *out = d->impl.labeled() ? 1 : 0;
  });
}

namespace {

void check_index(size_t index, size_t size) {
  if (index >= size) {
    ppdepth::raise(ppdepth::ErrorCode::invalid_argument,
                   "index " + std::to_string(index) +
                       " out of range for size " + std::to_string(size));
  }
}

}  // namespace

ppd_status ppd_dataset_events(const ppd_dataset* d, size_t index,
                              const double** out_events, size_t* out_len) {
  return guarded([&] {
    require(d, "dataset");
    require(out_events, "out_events");
    require(out_len, "out_len");
    check_index(index, d->impl.size());
    const auto& ev = d->impl.at(index).events();
    *out_events = ev.data();
    *out_len = ev.size();
  });
}

ppd_status ppd_dataset_label(const ppd_dataset* d, size_t index,
                             const char** out_label) {
  return guarded([&] {
    require(d, "dataset");
    require(out_label, "out_label");
    check_index(index, d->impl.size());
    *out_label = d->impl.labeled() ? d->impl.label(index).c_str() : nullptr;
  });
}

void ppd_dataset_free(ppd_dataset* d) { delete d; }

/* Simulation -------------------------------------------------------- */

ppd_status ppd_simulate_hpp(double rate, double t1, double t2, size_t n,
                            uint64_t seed, ppd_dataset** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ppd_dataset{ppdepth::simulate::sample_hpp_many(
        rate, ppdepth::TimeDomain(t1, t2), n, seed)};
  });
}

ppd_status ppd_simulate_ipp(const ppd_intensity* intensity, size_t n,
                            uint64_t seed, ppd_dataset** out) {
  return guarded([&] {
    require(intensity, "intensity");
    require(out, "out");
    *out = new ppd_dataset{
        ppdepth::simulate::sample_ipp_many(intensity->impl, n, seed)};
  });
}

/* Intensity models --------------------------------------------------- */

ppd_status ppd_intensity_from_grid(const double* ts, const double* lambdas,
                                   size_t n, ppd_intensity** out) {
  return guarded([&] {
    require(ts, "ts");
    require(lambdas, "lambdas");
    require(out, "out");
    *out = new ppd_intensity{ppdepth::rescale::IntensityModel::from_grid(
        std::vector<double>(ts, ts + n),
        std::vector<double>(lambdas, lambdas + n))};
  });
}

ppd_status ppd_intensity_read_file(const char* path, ppd_intensity** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ppd_intensity{ppdepth::rescale::read_intensity_file(path)};
  });
}

ppd_status ppd_intensity_write_file(const ppd_intensity* m,
                                    const char* path) {
  return guarded([&] {
    require(m, "intensity");
    require(path, "path");
    ppdepth::rescale::write_intensity_file(path, m->impl);
  });
}

ppd_status ppd_intensity_estimate(const ppd_dataset* d, size_t bins,
                                  double bandwidth, ppd_intensity** out) {
  return guarded([&] {
    require(d, "dataset");
    require(out, "out");
    *out = new ppd_intensity{
        ppdepth::rescale::estimate_intensity(d->impl, bins, bandwidth)};
  });
}

ppd_status ppd_intensity_domain(const ppd_intensity* m, double* t1,
                                double* t2) {
  return guarded([&] {
    require(m, "intensity");
    require(t1, "t1");
    require(t2, "t2");
    *t1 = m->impl.domain().t1;
    *t2 = m->impl.domain().t2;
  });
}

ppd_status ppd_intensity_total(const ppd_intensity* m, double* out) {
  return guarded([&] {
    require(m, "intensity");
    require(out, "out");
    *out = m->impl.total();
  });
}

ppd_status ppd_intensity_at(const ppd_intensity* m, double t, double* lambda,
                            double* cumulative) {
  return guarded([&] {
    require(m, "intensity");
    if (lambda) *lambda = m->impl.lambda_at(t);
    if (cumulative) *cumulative = m->impl.cumulative_at(t);
  });
}

void ppd_intensity_free(ppd_intensity* m) { delete m; }

/* Depth models ------------------------------------------------------- */

void ppd_fit_options_init(ppd_fit_options* opts) {
  if (!opts) return;
  opts->kind = "sample-dirichlet";
  opts->cardinality = "empirical";
  opts->r = 1.0;
  opts->cap = -1;
  opts->repetitions = 10;
  opts->bins = 0;
  opts->bandwidth = 0.0;
  opts->mixture_components = 0;
  opts->seed = 1;
}

ppd_status ppd_model_fit(const ppd_dataset* d, const ppd_fit_options* opts,
                         ppd_model** out) {
  return guarded([&] {
    require(d, "dataset");
    require(opts, "options");
    require(out, "out");
    namespace pd = ppdepth::depth;
    const pd::ConditionalKind kind = parse_kind(opts->kind);
    ppdepth::cardinality::CardinalityModel card =
        fit_cardinality(d->impl, *opts);
    switch (kind) {
      case pd::ConditionalKind::hpp:
        *out = new ppd_model{pd::DepthModel::hpp(d->impl.domain(),
                                                 std::move(card), opts->r)};
        return;
      case pd::ConditionalKind::sample_dirichlet: {
        pd::ConditionalMeanTable means = pd::bootstrap_conditional_means(
            d->impl, opts->cap, opts->repetitions, opts->seed,
            /*repair=*/true);
        *out = new ppd_model{pd::DepthModel::sample_dirichlet(
            std::move(card), opts->r, std::move(means))};
        return;
      }
      case pd::ConditionalKind::ts_dirichlet: {
        ppdepth::rescale::IntensityModel intensity =
            ppdepth::rescale::estimate_intensity(d->impl, opts->bins,
                                                 opts->bandwidth);
        *out = new ppd_model{pd::DepthModel::ts_dirichlet(
            std::move(card), opts->r, std::move(intensity))};
        return;
      }
      case pd::ConditionalKind::mahalanobis: {
        pd::MahalanobisTable table = pd::fit_mahalanobis_table(d->impl);
        *out = new ppd_model{pd::DepthModel::mahalanobis(
            d->impl.domain(), std::move(card), opts->r, std::move(table))};
        return;
      }
    }
  });
}

ppd_status ppd_model_to_json(const ppd_model* m, char** out_text) {
  return guarded([&] {
    require(m, "model");
    require(out_text, "out_text");
    *out_text = dup_string(ppdepth::serialize::model_to_text(m->impl));
  });
}

ppd_status ppd_model_from_json(const char* text, ppd_model** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new ppd_model{ppdepth::serialize::model_from_text(text)};
  });
}

ppd_status ppd_model_read_file(const char* path, ppd_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ppd_model{ppdepth::serialize::read_model_file(path)};
  });
}

ppd_status ppd_model_write_file(const ppd_model* m, const char* path) {
  return guarded([&] {
    require(m, "model");
    require(path, "path");
    ppdepth::serialize::write_model_file(path, m->impl);
  });
}

ppd_status ppd_model_domain(const ppd_model* m, double* t1, double* t2) {
  return guarded([&] {
    require(m, "model");
    require(t1, "t1");
    require(t2, "t2");
    *t1 = m->impl.domain().t1;
    *t2 = m->impl.domain().t2;
  });
}

ppd_status ppd_model_kind(const ppd_model* m, const char** out_kind) {
  return guarded([&] {
    require(m, "model");
    require(out_kind, "out_kind");
    switch (m->impl.kind()) {
      case ppdepth::depth::ConditionalKind::hpp:
        *out_kind = "hpp";
        return;
      case ppdepth::depth::ConditionalKind::sample_dirichlet:
        *out_kind = "sample-dirichlet";
        return;
      case ppdepth::depth::ConditionalKind::ts_dirichlet:
        *out_kind = "ts-dirichlet";
        return;
      case ppdepth::depth::ConditionalKind::mahalanobis:
        *out_kind = "mahalanobis";
        return;
    }
  });
}

void ppd_model_free(ppd_model* m) { delete m; }

ppd_status ppd_model_depth(const ppd_model* m, const double* events,
                           size_t n_events, ppd_score* out) {
  return guarded([&] {
    require(m, "model");
    require(out, "out");
    ppdepth::Realization s(m->impl.domain(), copy_events(events, n_events));
    const ppdepth::depth::DepthBreakdown b =
        ppdepth::depth::combined_depth(m->impl, s);
    *out = ppd_score{0,
                     static_cast<long long>(n_events),
                     b.weight,
                     b.conditional,
                     b.depth,
                     b.missing_row ? 1 : 0};
  });
}

ppd_status ppd_model_score(const ppd_model* m, const ppd_dataset* d,
                           ppd_score** out_scores, size_t* out_len) {
  return guarded([&] {
    require(m, "model");
    require(d, "dataset");
    require(out_scores, "out_scores");
    require(out_len, "out_len");
    export_scores(ppdepth::analysis::score(m->impl, d->impl), out_scores,
                  out_len);
  });
}

ppd_status ppd_model_rank(const ppd_model* m, const ppd_dataset* d,
                          ppd_score** out_scores, size_t* out_len) {
  return guarded([&] {
    require(m, "model");
    require(d, "dataset");
    require(out_scores, "out_scores");
    require(out_len, "out_len");
    export_scores(ppdepth::analysis::rank(m->impl, d->impl), out_scores,
                  out_len);
  });
}

void ppd_scores_free(ppd_score* scores) { delete[] scores; }

ppd_status ppd_model_gof(const ppd_model* m, const ppd_dataset* d,
                         ppd_gof_row** out_rows, size_t* out_len) {
  return guarded([&] {
    require(m, "model");
    require(d, "dataset");
    require(out_rows, "out_rows");
    require(out_len, "out_len");
    if (m->impl.kind() != ppdepth::depth::ConditionalKind::ts_dirichlet) {
      ppdepth::raise(ppdepth::ErrorCode::invalid_argument,
                     "goodness of fit needs a model that carries an "
                     "intensity (ts-dirichlet)");
    }
    const std::vector<ppdepth::analysis::RankEntry> entries =
        ppdepth::analysis::score(m->impl, d->impl);
    auto* rows = new ppd_gof_row[entries.empty() ? 1 : entries.size()];
    for (size_t i = 0; i < entries.size(); ++i) {
      rows[i].score = to_score(entries[i]);
      if (entries[i].cardinality > 0) {
        const ppdepth::analysis::KsResult ks = ppdepth::analysis::ks_uniformity(
            d->impl.at(entries[i].index), m->impl.intensity());
        rows[i].has_ks = 1;
        rows[i].ks_stat = ks.statistic;
        rows[i].ks_p = ks.p_value;
      } else {
        rows[i].has_ks = 0;
        rows[i].ks_stat = 0.0;
        rows[i].ks_p = 0.0;
      }
    }
    *out_rows = rows;
    *out_len = entries.size();
  });
}

void ppd_gof_rows_free(ppd_gof_row* rows) { delete[] rows; }

ppd_status ppd_ks_uniformity(const double* events, size_t n_events,
                             const ppd_intensity* m, double* out_stat,
                             double* out_p) {
  return guarded([&] {
    require(m, "intensity");
    require(out_stat, "out_stat");
    require(out_p, "out_p");
    ppdepth::Realization s(m->impl.domain(), copy_events(events, n_events));
    const ppdepth::analysis::KsResult ks =
        ppdepth::analysis::ks_uniformity(s, m->impl);
    *out_stat = ks.statistic;
    *out_p = ks.p_value;
  });
}

/* Classification ----------------------------------------------------- */

ppd_status ppd_classifier_train(const ppd_dataset* train,
                                const ppd_fit_options* opts,
                                ppd_classifier** out) {
  return guarded([&] {
    require(train, "train");
    require(opts, "options");
    require(out, "out");
    ppdepth::analysis::ClassifierConfig config;
    config.kind = parse_kind(opts->kind);
    config.r = opts->r;
    config.cap = opts->cap;
    config.repetitions = opts->repetitions;
    config.bins = opts->bins;
    config.bandwidth = opts->bandwidth;
    config.mixture_components = opts->mixture_components;
    config.seed = opts->seed;
    *out = new ppd_classifier{
        ppdepth::analysis::train_classifier(train->impl, config)};
  });
}

ppd_status ppd_classifier_num_classes(const ppd_classifier* c, size_t* out) {
  return guarded([&] {
    require(c, "classifier");
    require(out, "out");
    *out = c->impl.num_classes();
  });
}

ppd_status ppd_classifier_label(const ppd_classifier* c, size_t index,
                                const char** out_label) {
  return guarded([&] {
    require(c, "classifier");
    require(out_label, "out_label");
    check_index(index, c->impl.num_classes());
    *out_label = c->impl.labels()[index].c_str();
  });
}

ppd_status ppd_classifier_classify(const ppd_classifier* c,
                                   const double* events, size_t n_events,
                                   int force, const char** out_label,
                                   double* out_depths) {
  return guarded([&] {
    require(c, "classifier");
    require(out_label, "out_label");
    ppdepth::Realization s(c->impl.domain(), copy_events(events, n_events));
    const ppdepth::analysis::Classification result =
        ppdepth::analysis::classify(c->impl, s, force != 0);
    if (out_depths) {
      std::copy(result.depths.begin(), result.depths.end(), out_depths);
    }
    if (result.abstained) {
      *out_label = "abstain";
      return;
    }
    // Hand back the classifier's own stored label so the pointer outlives
    // this call.
    const auto& labels = c->impl.labels();
    for (const std::string& label : labels) {
      if (label == result.label) {
        *out_label = label.c_str();
        return;
      }
    }
    ppdepth::raise(ppdepth::ErrorCode::invalid_argument,
                   "classifier returned a label it does not own");
  });
}

void ppd_classifier_free(ppd_classifier* c) { delete c; }

ppd_status ppd_likelihood_train(const ppd_dataset* train, size_t bins,
                                double bandwidth, ppd_likelihood** out) {
  return guarded([&] {
    require(train, "train");
    require(out, "out");
    *out = new ppd_likelihood{
        ppdepth::analysis::train_likelihood(train->impl, bins, bandwidth)};
  });
}

ppd_status ppd_likelihood_num_classes(const ppd_likelihood* c, size_t* out) {
  return guarded([&] {
    require(c, "classifier");
    require(out, "out");
    *out = c->impl.num_classes();
  });
}

ppd_status ppd_likelihood_label(const ppd_likelihood* c, size_t index,
                                const char** out_label) {
  return guarded([&] {
    require(c, "classifier");
    require(out_label, "out_label");
    check_index(index, c->impl.num_classes());
    *out_label = c->impl.labels()[index].c_str();
  });
}

ppd_status ppd_likelihood_classify(const ppd_likelihood* c,
                                   const double* events, size_t n_events,
                                   const char** out_label,
                                   double* out_log_likelihoods) {
  return guarded([&] {
    require(c, "classifier");
    require(out_label, "out_label");
    ppdepth::Realization s(c->impl.domain(), copy_events(events, n_events));
    const ppdepth::analysis::LikelihoodClassification result =
        ppdepth::analysis::likelihood_classify(c->impl, s);
    if (out_log_likelihoods) {
      std::copy(result.log_likelihoods.begin(), result.log_likelihoods.end(),
                out_log_likelihoods);
    }
    for (const std::string& label : c->impl.labels()) {
      if (label == result.label) {
        *out_label = label.c_str();
        return;
      }
    }
    ppdepth::raise(ppdepth::ErrorCode::invalid_argument,
                   "classifier returned a label it does not own");
  });
}

void ppd_likelihood_free(ppd_likelihood* c) { delete c; }

/* Contours ----------------------------------------------------------- */

ppd_status ppd_contour_grid(const char* kind, size_t resolution,
                            double** out_triples, size_t* out_len) {
  return guarded([&] {
    require(kind, "kind");
    require(out_triples, "out_triples");
    require(out_len, "out_len");
    const std::string k(kind);
    ppdepth::analysis::ContourKind ck;
    if (k == "dirichlet") {
      ck = ppdepth::analysis::ContourKind::dirichlet;
    } else if (k == "mahalanobis") {
      ck = ppdepth::analysis::ContourKind::mahalanobis;
    } else {
      ppdepth::raise(ppdepth::ErrorCode::invalid_argument,
                     "unknown contour kind '" + k +
                         "'; expected dirichlet or mahalanobis");
    }
    const std::vector<ppdepth::analysis::ContourPoint> grid =
        ppdepth::analysis::contour_grid(ck, resolution);
    auto* flat = new double[grid.empty() ? 1 : 3 * grid.size()];
    for (size_t i = 0; i < grid.size(); ++i) {
      flat[3 * i] = grid[i].u1;
      flat[3 * i + 1] = grid[i].u2;
      flat[3 * i + 2] = grid[i].depth;
    }
    *out_triples = flat;
    *out_len = grid.size();
  });
}

void ppd_grid_free(double* grid) { delete[] grid; }

} /* extern "C" */
