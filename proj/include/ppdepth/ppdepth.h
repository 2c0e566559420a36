/* ppdepth: center-outward depth for temporal point process realizations.
 *
 * C interface to the shared library. Conventions:
 *   - Every function returns a ppd_status; outputs go through pointers.
 *   - On failure nothing is written to outputs and ppd_last_error() holds a
 *     message (thread local, valid until the next call on that thread).
 *   - Objects are opaque handles released with the matching *_free; freeing
 *     NULL is a no-op. Strings returned through char** are released with
 *     ppd_string_free, arrays through the matching *_free.
 *   - Pointers returned through const char** / const double** borrow from
 *     the owning handle and die with it.
 *
 * Distributed under the MIT license; see LICENSE in the source tree.
 */
#ifndef PPDEPTH_H
#define PPDEPTH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ppd_status {
  PPD_OK = 0,
  PPD_ERROR_VALIDATION = 1, /* bad arguments, domain violations */
  PPD_ERROR_PARSE = 2,      /* malformed text input */
  PPD_ERROR_IO = 3,         /* file system failure */
  PPD_ERROR_INTERNAL = 4    /* unexpected condition; report it */
} ppd_status;

/* Message for the most recent failure on this thread; never NULL. */
const char* ppd_last_error(void);

const char* ppd_library_version(void);

void ppd_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Datasets: ordered event-time realizations on a shared observation
 * window [t1, t2], optionally labeled. */

typedef struct ppd_dataset ppd_dataset;

ppd_status ppd_dataset_create(double t1, double t2, ppd_dataset** out);
ppd_status ppd_dataset_add(ppd_dataset* d, const double* events,
                           size_t n_events, const char* label_or_null);

/* Text form: one realization per line, ascending times separated by spaces,
 * optional leading "label:", '#' comments, blank line = empty realization. */
ppd_status ppd_dataset_parse(const char* text, double t1, double t2,
                             ppd_dataset** out);
ppd_status ppd_dataset_read_file(const char* path, double t1, double t2,
                                 ppd_dataset** out);
ppd_status ppd_dataset_render(const ppd_dataset* d, char** out_text);
ppd_status ppd_dataset_write_file(const ppd_dataset* d, const char* path);

ppd_status ppd_dataset_size(const ppd_dataset* d, size_t* out);
ppd_status ppd_dataset_domain(const ppd_dataset* d, double* t1, double* t2);
ppd_status ppd_dataset_labeled(const ppd_dataset* d, int* out);
ppd_status ppd_dataset_events(const ppd_dataset* d, size_t index,
                              const double** out_events, size_t* out_len);
/* NULL for unlabeled datasets. */
ppd_status ppd_dataset_label(const ppd_dataset* d, size_t index,
                             const char** out_label);
void ppd_dataset_free(ppd_dataset* d);

/* ------------------------------------------------------------------ */
/* Simulation. Fixed seed + fixed build = identical output; realization i
 * draws from its own substream, so prefixes agree across different n. */

ppd_status ppd_simulate_hpp(double rate, double t1, double t2, size_t n,
                            uint64_t seed, ppd_dataset** out);

typedef struct ppd_intensity ppd_intensity;

/* Thinning against max lambda of the grid intensity. */
ppd_status ppd_simulate_ipp(const ppd_intensity* intensity, size_t n,
                            uint64_t seed, ppd_dataset** out);

/* ------------------------------------------------------------------ */
/* Intensity models: piecewise-linear lambda(t) >= 0 on a strictly
 * increasing grid, with its cumulative integral. */

ppd_status ppd_intensity_from_grid(const double* ts, const double* lambdas,
                                   size_t n, ppd_intensity** out);
/* Two-column "t lambda" text, '#' comments. */
ppd_status ppd_intensity_read_file(const char* path, ppd_intensity** out);
ppd_status ppd_intensity_write_file(const ppd_intensity* m, const char* path);
/* Histogram of pooled event times smoothed with a Gaussian kernel.
 * bins = 0 and bandwidth <= 0 pick data-driven defaults. */
ppd_status ppd_intensity_estimate(const ppd_dataset* d, size_t bins,
                                  double bandwidth, ppd_intensity** out);
ppd_status ppd_intensity_domain(const ppd_intensity* m, double* t1,
                                double* t2);
ppd_status ppd_intensity_total(const ppd_intensity* m, double* out);
ppd_status ppd_intensity_at(const ppd_intensity* m, double t, double* lambda,
                            double* cumulative);
void ppd_intensity_free(ppd_intensity* m);

/* ------------------------------------------------------------------ */
/* Depth models: cardinality weight w(|s|)^r times a conditional depth. */

typedef struct ppd_model ppd_model;

typedef struct ppd_fit_options {
  /* "hpp" | "sample-dirichlet" | "ts-dirichlet" | "mahalanobis" */
  const char* kind;
  /* "empirical" | "poisson" | "mixture" */
  const char* cardinality;
  double r;               /* weight exponent, >= 0 */
  long long cap;          /* largest tabulated cardinality; < 0 = auto */
  int repetitions;        /* bootstrap rounds for sample-dirichlet */
  size_t bins;            /* intensity histogram bins; 0 = auto */
  double bandwidth;       /* intensity smoothing; <= 0 = auto */
  int mixture_components; /* fixed component count; 0 = BIC over 1..5 */
  uint64_t seed;
} ppd_fit_options;

/* Defaults: sample-dirichlet, empirical cardinality, r = 1, auto cap,
 * 10 repetitions, auto bins/bandwidth, BIC component search, seed = 1. */
void ppd_fit_options_init(ppd_fit_options* opts);

ppd_status ppd_model_fit(const ppd_dataset* d, const ppd_fit_options* opts,
                         ppd_model** out);
ppd_status ppd_model_to_json(const ppd_model* m, char** out_text);
ppd_status ppd_model_from_json(const char* text, ppd_model** out);
ppd_status ppd_model_read_file(const char* path, ppd_model** out);
ppd_status ppd_model_write_file(const ppd_model* m, const char* path);
ppd_status ppd_model_domain(const ppd_model* m, double* t1, double* t2);
/* Static string naming the conditional kind. */
ppd_status ppd_model_kind(const ppd_model* m, const char** out_kind);
void ppd_model_free(ppd_model* m);

typedef struct ppd_score {
  size_t index;
  long long cardinality;
  double weight;      /* w(|s|)^r */
  double conditional; /* conditional depth given |s| */
  double depth;       /* product */
  int missing_row;    /* weighted cardinality absent from the fitted table */
} ppd_score;

ppd_status ppd_model_depth(const ppd_model* m, const double* events,
                           size_t n_events, ppd_score* out);
/* One score per realization, input order. */
ppd_status ppd_model_score(const ppd_model* m, const ppd_dataset* d,
                           ppd_score** out_scores, size_t* out_len);
/* Sorted by depth descending, index ascending on ties. */
ppd_status ppd_model_rank(const ppd_model* m, const ppd_dataset* d,
                          ppd_score** out_scores, size_t* out_len);
void ppd_scores_free(ppd_score* scores);

/* Goodness of fit: score plus a KS uniformity test of the rescaled events.
 * Requires a model that carries an intensity. has_ks = 0 for empty
 * realizations (the KS test is undefined there). */
typedef struct ppd_gof_row {
  ppd_score score;
  int has_ks;
  double ks_stat;
  double ks_p;
} ppd_gof_row;

ppd_status ppd_model_gof(const ppd_model* m, const ppd_dataset* d,
                         ppd_gof_row** out_rows, size_t* out_len);
void ppd_gof_rows_free(ppd_gof_row* rows);

/* One-sample KS of {Lambda(s_i)/Lambda(t2)} against Uniform[0,1]. */
ppd_status ppd_ks_uniformity(const double* events, size_t n_events,
                             const ppd_intensity* m, double* out_stat,
                             double* out_p);

/* ------------------------------------------------------------------ */
/* Maximum-depth classification. */

typedef struct ppd_classifier ppd_classifier;

/* Trains one depth model per label in the dataset (>= 2 labels required).
 * opts->cardinality is ignored: class models always use the Poisson
 * mixture. */
ppd_status ppd_classifier_train(const ppd_dataset* train,
                                const ppd_fit_options* opts,
                                ppd_classifier** out);
ppd_status ppd_classifier_num_classes(const ppd_classifier* c, size_t* out);
ppd_status ppd_classifier_label(const ppd_classifier* c, size_t index,
                                const char** out_label);
/* out_label borrows from the classifier ("abstain" when every class scores
 * zero and force = 0). out_depths, when non-NULL, must hold num_classes
 * doubles and receives the per-class combined depths. */
ppd_status ppd_classifier_classify(const ppd_classifier* c,
                                   const double* events, size_t n_events,
                                   int force, const char** out_label,
                                   double* out_depths);
void ppd_classifier_free(ppd_classifier* c);

/* Inhomogeneous-Poisson likelihood baseline. */
typedef struct ppd_likelihood ppd_likelihood;

ppd_status ppd_likelihood_train(const ppd_dataset* train, size_t bins,
                                double bandwidth, ppd_likelihood** out);
ppd_status ppd_likelihood_num_classes(const ppd_likelihood* c, size_t* out);
ppd_status ppd_likelihood_label(const ppd_likelihood* c, size_t index,
                                const char** out_label);
ppd_status ppd_likelihood_classify(const ppd_likelihood* c,
                                   const double* events, size_t n_events,
                                   const char** out_label,
                                   double* out_log_likelihoods);
void ppd_likelihood_free(ppd_likelihood* c);

/* ------------------------------------------------------------------ */
/* Contour export: conditional depth of the two-event realization with gaps
 * (u1, u2) on [0,1], on a regular grid over {u1+u2 <= 1}. kind is
 * "dirichlet" or "mahalanobis". Rows are (u1, u2, depth) triples written
 * consecutively; *out_len counts rows. Free with ppd_grid_free. */
ppd_status ppd_contour_grid(const char* kind, size_t resolution,
                            double** out_triples, size_t* out_len);
void ppd_grid_free(double* grid);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PPDEPTH_H */
