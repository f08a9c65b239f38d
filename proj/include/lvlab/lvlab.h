/* C interface of the lvlab shared library.
 *
 * Every call returns an lv_status. On failure lv_last_error() describes the
 * problem (per thread, valid until the next failing call). Strings returned
 * through char** out-parameters are owned by the caller and released with
 * lv_string_free. Handles are released with their *_free function; passing
 * NULL to a free function is a no-op. */
#ifndef LVLAB_H
#define LVLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(LVLAB_BUILDING)
#define LV_API __attribute__((visibility("default")))
#else
#define LV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lv_status {
  LV_OK = 0,
  LV_ERR_PRECONDITION = 1,
  LV_ERR_DOMAIN = 2,
  LV_ERR_GEOMETRY = 3,
  LV_ERR_CONSTRUCTION = 4,
  LV_ERR_PARSE = 5,
  LV_ERR_IO = 6,
  LV_ERR_ARGUMENT = 7, /* NULL handle or out-parameter, bad enum value */
  LV_ERR_INTERNAL = 8
} lv_status;

typedef struct lv_config lv_config; /* tolerances and random seed */
typedef struct lv_grid lv_grid;
typedef struct lv_form lv_form; /* Liouville form on a grid */

LV_API const char* lv_version(void);
LV_API const char* lv_last_error(void);
LV_API void lv_string_free(char* s);

/* ---- configuration */
LV_API lv_status lv_config_new(lv_config** out);
LV_API void lv_config_free(lv_config* c);
/* Unknown names and non-positive values are LV_ERR_ARGUMENT. */
LV_API lv_status lv_config_set_tolerance(lv_config* c, const char* name, double value);
LV_API lv_status lv_config_set_seed(lv_config* c, uint64_t seed);
LV_API lv_status lv_config_seed(const lv_config* c, uint64_t* out);
LV_API lv_status lv_config_tolerances_json(const lv_config* c, char** out);

/* ---- grid2d */
/* spec: "radial:k", "sectors:f1,f2,..", "periodic:n", "bump:fraction", "tripod:cx,cy,straight",
 * or the path of a grid JSON file */
LV_API lv_status lv_grid_from_spec(const lv_config* c, const char* spec, double area, lv_grid** out);
LV_API lv_status lv_grid_from_json(const lv_config* c, const char* json, lv_grid** out);
LV_API void lv_grid_free(lv_grid* g);
LV_API lv_status lv_grid_to_json(const lv_grid* g, char** out);
/* {"faces":n,"area":A,"face_areas":[..],"regular":bool,"failure":".."} */
LV_API lv_status lv_grid_summary_json(const lv_grid* g, char** out);
LV_API lv_status lv_grid_face_count(const lv_grid* g, size_t* out);

/* ---- liouville2d */
LV_API lv_status lv_form_build(const lv_grid* g, int smoothing, lv_form** out);
LV_API void lv_form_free(lv_form* f);
LV_API lv_status lv_form_to_json(const lv_form* f, char** out);
LV_API lv_status lv_form_eval(const lv_form* f, double x, double y, double lambda[2], double X[2]);
LV_API lv_status lv_form_residue(const lv_form* f, int face, double rho, double* out);
/* {"classification":"ConvergedTo|OnSkeleton|Undecided","face":i,"hit_time":t,"points":[[t,x,y],..]} */
LV_API lv_status lv_form_flow_json(const lv_form* f, double x, double y, double t_max, int direction, char** out);
/* Runs the whole 2D battery. *all_pass is 1 when every check passes. */
LV_API lv_status lv_form_check_json(const lv_form* f, const lv_config* c, int* all_pass, char** out);

/* ---- polar4d (product of two forms) */
LV_API lv_status lv_polar4_classify_json(const lv_form* a, const lv_form* b, const double point[4], double t_max, char** out);
LV_API lv_status lv_polar4_check_json(const lv_form* a, const lv_form* b, const lv_config* c, int* all_pass, char** out);
LV_API lv_status lv_sdb_eval_json(int c1, double area, const double point[4], char** out);

/* ---- divisor_arith; reports are
 * {"verdict":"feasible|infeasible","numbers":{name:"exact value"},"certificate":[..],"violated":".."} */
LV_API lv_status lv_feasible_baby_json(int64_t k, int* feasible, char** out);
LV_API lv_status lv_feasible_ellipsoid_json(int64_t m, int64_t d, int64_t N, int* feasible, char** out);
LV_API lv_status lv_feasible_remb_json(int64_t N, int* feasible, char** out);
LV_API lv_status lv_feasible_morphism_json(const char* source_json, const char* target_json, int* feasible, char** out);
/* nodes_json: [[i, j, count], ..] */
LV_API lv_status lv_smooth_json(const char* divisor_json, const char* nodes_json, char** out);
LV_API lv_status lv_monotone_k_json(int64_t m, int64_t n, double a, double b, char** out);
LV_API lv_status lv_flux_json(double period, double t, char** out);

/* ---- reeb3
 * surface: "sphere", "ellipsoid:a,b", "lp:p,a,b" or JSON.
 * knot: a spec ("unknot", "fiber:n,eps,r", "torus:p,q,eps", "arc:k,i,j") or knot JSON.
 * targets: "self", "barrier:k" or "barrier:k1,k2" (the knot plus Lambda_delta),
 * or a knot spec/JSON. */
LV_API lv_status lv_reeb_knot_json(const char* surface, const char* knot, int samples, char** out);
LV_API lv_status lv_reeb_chords_json(const lv_config* c, const char* surface, const char* knot, const char* targets,
                                     double t_max, int direction, char** out);
LV_API lv_status lv_reeb_sweep_json(int k, double T, int resolution, int* components, char** out);
LV_API lv_status lv_reeb_torus_json(const lv_config* c, const char* surface, const char* knot, double T, double eps,
                                    char** out);
LV_API lv_status lv_reeb_check_json(const lv_config* c, const char* surface, int* all_pass, char** out);

/* ---- plots (SVG text) */
LV_API lv_status lv_plot_grid(const lv_grid* g, char** out);
/* starts: n points (x, y) flowed forward for t_max and drawn over the leaves; may be NULL when n = 0 */
LV_API lv_status lv_plot_foliation(const lv_form* f, const double* starts, size_t n, double t_max, char** out);
LV_API lv_status lv_plot_divisor(const char* divisor_json, char** out);
LV_API lv_status lv_plot_monotone(int64_t m, int64_t n, double a, double b, char** out);
LV_API lv_status lv_plot_hopf(int k, char** out);

LV_API lv_status lv_write_file(const char* path, const char* content);

#ifdef __cplusplus
}
#endif

#endif
