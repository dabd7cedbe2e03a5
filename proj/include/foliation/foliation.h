/* C interface to the foliation-energy library.
 *
 * Every object is an opaque handle released with its matching *_free call.
 * Functions return an fe_status; on failure fe_last_error() describes the
 * problem for the calling thread. Strings returned through char** are owned
 * by the caller and released with fe_string_free. */
#ifndef FOLIATION_FOLIATION_H
#define FOLIATION_FOLIATION_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FE_API __declspec(dllexport)
#else
#define FE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fe_status {
    FE_OK = 0,
    FE_ERR_INVALID_INPUT = 1,
    FE_ERR_NUMERICAL = 2,
    FE_ERR_IO = 3,
    FE_ERR_INTERNAL = 4
} fe_status;

typedef struct fe_measure fe_measure;
typedef struct fe_plan fe_plan;
typedef struct fe_scenario fe_scenario;
typedef struct fe_disintegration fe_disintegration;

FE_API const char* fe_version(void);
FE_API const char* fe_last_error(void);
FE_API void fe_string_free(char* s);

/* Writes via a temporary file renamed into place. */
FE_API fe_status fe_write_text_atomic(const char* path, const char* text);

/* ---- measures ---------------------------------------------------------- */

FE_API fe_status fe_measure_create(const double* x1, const double* x2, const double* w, size_t n,
                                   fe_measure** out);
/* CSV with header x1,x2,w; rows with w <= 0 are rejected. */
FE_API fe_status fe_measure_load_csv(const char* path, fe_measure** out);
FE_API size_t fe_measure_size(const fe_measure* m);
FE_API double fe_measure_mass(const fe_measure* m);
FE_API fe_status fe_measure_atom(const fe_measure* m, size_t k, double* x1, double* x2, double* w);
FE_API void fe_measure_free(fe_measure* m);

/* ---- transport --------------------------------------------------------- */

/* Exact W_p. `plan` may be NULL when only the value is wanted. */
FE_API fe_status fe_wasserstein(const fe_measure* mu, const fe_measure* nu, double p, double* value,
                                fe_plan** plan);
/* Spanning-tree enumeration; at most 3 atoms per side. */
FE_API fe_status fe_wasserstein_brute_force(const fe_measure* mu, const fe_measure* nu, double p,
                                            double* value);
FE_API size_t fe_plan_size(const fe_plan* plan);
FE_API double fe_plan_cost(const fe_plan* plan);
FE_API fe_status fe_plan_entry(const fe_plan* plan, size_t k, size_t* row, size_t* col,
                               double* flow);
/* CSV i,j,flow preceded by a comment line carrying `config`. */
FE_API fe_status fe_plan_write_csv(const fe_plan* plan, const char* path, const char* config);
FE_API void fe_plan_free(fe_plan* plan);

/* ---- scenarios --------------------------------------------------------- */

typedef enum fe_scenario_kind {
    FE_SCENARIO_CIRCLE = 0,
    FE_SCENARIO_ELLIPSE = 1,
    FE_SCENARIO_ELLIPSE_DIRAC = 2,
    FE_SCENARIO_SQUARE = 3,
    FE_SCENARIO_GRAPH = 4
} fe_scenario_kind;

typedef enum fe_graph_map {
    FE_GRAPH_IDENTITY = 0,
    FE_GRAPH_SINE = 1,
    FE_GRAPH_PARABOLA = 2
} fe_graph_map;

typedef struct fe_scenario_params {
    double lambda;
    double R;
    double y_min; /* <= 0 selects 0.1 R */
    size_t fibers;
    size_t points;
    size_t grid;
    size_t graph_samples;
    fe_graph_map graph_map;
    int equal_weight; /* nonzero: equal-weight quantile atoms */
} fe_scenario_params;

FE_API void fe_scenario_params_default(fe_scenario_params* params);
FE_API fe_status fe_scenario_kind_parse(const char* name, fe_scenario_kind* out);
FE_API fe_status fe_graph_map_parse(const char* name, fe_graph_map* out);
FE_API fe_status fe_scenario_build(fe_scenario_kind kind, const fe_scenario_params* params,
                                   fe_scenario** out);
/* `.csv` (x1,x2,label[,w]) or `.json`. */
FE_API fe_status fe_scenario_load(const char* path, fe_scenario** out);
FE_API fe_status fe_scenario_write_csv(const fe_scenario* s, const char* path, const char* config);
FE_API fe_status fe_scenario_bin_labels(const fe_scenario* s, double width, fe_scenario** out);
FE_API size_t fe_scenario_size(const fe_scenario* s);
FE_API void fe_scenario_free(fe_scenario* s);

/* ---- disintegration ---------------------------------------------------- */

FE_API fe_status fe_disintegrate(const fe_scenario* s, fe_disintegration** out);
FE_API size_t fe_disintegration_label_count(const fe_disintegration* d);
FE_API fe_status fe_disintegration_label(const fe_disintegration* d, size_t k, double* label);
/* Writes base.csv and fiber_<label>.csv into `dir`. */
FE_API fe_status fe_disintegration_write(const fe_disintegration* d, const char* dir,
                                         const char* config);
FE_API void fe_disintegration_free(fe_disintegration* d);

/* ---- energy ------------------------------------------------------------ */

typedef struct fe_analyze_options {
    double p;
    double tolerance;
    double eps0; /* <= 0 selects the fiber-metric diameter */
    int isometry_gap; /* nonzero: include the global isometry gap */
} fe_analyze_options;

FE_API void fe_analyze_options_default(fe_analyze_options* options);
/* JSON report; `energy` and `verdict` may be NULL. verdict is one of
 * metric_measure_foliation, not_foliation, inconclusive. */
FE_API fe_status fe_analyze(const fe_disintegration* d, const fe_analyze_options* options,
                            const char* config, char** report_json, double* energy,
                            const char** verdict);

/* ---- closed forms and tables ------------------------------------------- */

FE_API fe_status fe_perimeter(double y, double lambda, double* out);
FE_API fe_status fe_closed_form_w1(double y, double yp, double lambda, double* out);
FE_API fe_status fe_closed_form_energy(double lambda, double* out);
/* CSV lambda,L_1,E_1 at the reference lambdas. */
FE_API fe_status fe_tables_csv(char** csv);
FE_API fe_status fe_arc_profile_csv(const double* lambdas, size_t count, size_t steps, char** csv);
FE_API fe_status fe_energy_curve_csv(double lambda_min, double lambda_max, size_t steps, char** csv);

/* ---- diagnostics ------------------------------------------------------- */

/* Randomized solver checks; summary JSON and an overall pass flag. */
FE_API fe_status fe_self_check(uint64_t seed, char** summary_json, int* passed);

#ifdef __cplusplus
}
#endif

#endif /* FOLIATION_FOLIATION_H */
