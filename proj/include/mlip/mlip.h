/* C interface to the MLIP walking toolkit.
 *
 * All entry points return a status code; on failure mlip_last_error()
 * carries a thread-local message. Objects are opaque handles created and
 * destroyed here; strings returned through char** are heap-allocated and
 * must be released with mlip_string_free().
 */

#ifndef MLIP_MLIP_H_
#define MLIP_MLIP_H_

#include <stdint.h>

#if defined(_WIN32)
#define MLIP_API __declspec(dllexport)
#else
#define MLIP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mlip_status {
  MLIP_OK = 0,
  MLIP_ERR_INVALID_ARGUMENT = 1, /* bad value or null handle */
  MLIP_ERR_PARSE = 2,            /* malformed or unknown-key JSON */
  MLIP_ERR_NUMERICAL = 3,        /* singularity, non-convergence, divergence */
  MLIP_ERR_IO = 4,               /* file system failure */
  MLIP_ERR_INTERNAL = 5
} mlip_status;

MLIP_API const char* mlip_status_name(mlip_status status);
MLIP_API const char* mlip_last_error(void);
MLIP_API void mlip_string_free(char* text);

typedef struct mlip_params mlip_params;
typedef struct mlip_s2s mlip_s2s;
typedef struct mlip_orbit mlip_orbit;
typedef struct mlip_gains mlip_gains;
typedef struct mlip_scenario mlip_scenario;
typedef struct mlip_trace mlip_trace;

/* ---- gait parameters ---------------------------------------------------- */

/* Default sagittal gait: z = 0.8 m, foot 0.16 m, 0.2/0.2/0.1 s domains. */
MLIP_API mlip_status mlip_params_default(mlip_params** out);
/* Lateral-plane gait: zero flat-foot phase, 0.4 s pivot, 0.1 s transfer. */
MLIP_API mlip_status mlip_params_default_lateral(mlip_params** out);
MLIP_API mlip_status mlip_params_from_json(const char* json, mlip_params** out);
MLIP_API mlip_status mlip_params_to_json(const mlip_params* params, char** json_out);
/* keys: com_height, foot_length, gravity, t_fa, t_ua, t_oa */
MLIP_API mlip_status mlip_params_set(mlip_params* params, const char* key, double value);
/* "heel-to-toe", "toe-to-heel", "flat-footed" */
MLIP_API mlip_status mlip_params_set_mode(mlip_params* params, const char* mode);
MLIP_API void mlip_params_free(mlip_params* params);

/* ---- step-to-step dynamics ---------------------------------------------- */

/* section: 0 samples at the end of the pivot phase, 1 at the end of the
 * flat-foot phase. */
MLIP_API mlip_status mlip_s2s_compose(const mlip_params* params, int fa_end_section,
                                      mlip_s2s** out);
/* Reduced 2-state map; a is row-major. */
MLIP_API mlip_status mlip_s2s_reduced(const mlip_s2s* s2s, double a[4], double b[2],
                                      double c[2]);
MLIP_API mlip_status mlip_s2s_to_json(const mlip_s2s* s2s, char** json_out);
MLIP_API mlip_status mlip_s2s_structure_ok(const mlip_s2s* s2s, int* ok_out);
MLIP_API void mlip_s2s_free(mlip_s2s* s2s);

/* ---- periodic orbits ----------------------------------------------------- */

MLIP_API mlip_status mlip_orbit_p1(const mlip_s2s* s2s, double v_d, mlip_orbit** out);
MLIP_API mlip_status mlip_orbit_p2(const mlip_s2s* s2s, double v_d, double u_left,
                                   mlip_orbit** out);
MLIP_API mlip_status mlip_orbit_to_json(const mlip_orbit* orbit, char** json_out);
/* Time-sampled nominal cycle: t,domain,p,L,p_zmp rows. */
MLIP_API mlip_status mlip_orbit_phase_csv(const mlip_orbit* orbit, char** csv_out);
MLIP_API void mlip_orbit_free(mlip_orbit* orbit);

/* Reference trajectories over one nominal step at speed v_d:
 * t,x_com_ref,v_com_ref,p_zmp_ref,theta_st_ref,theta_sw_ref rows. */
MLIP_API mlip_status mlip_reference_csv(const mlip_params* params, double v_d,
                                        char** csv_out);

/* ---- gain synthesis ------------------------------------------------------ */

/* method "lqr" uses q (row-major 2x2) and r; method "deadbeat" ignores
 * both (pass NULL / 0). */
MLIP_API mlip_status mlip_gains_synthesize(const mlip_s2s* s2s, const char* method,
                                           const double q[4], double r,
                                           mlip_gains** out);
MLIP_API mlip_status mlip_gains_vector(const mlip_gains* gains, double k[2],
                                       double* rho_cl);
/* Outer bound on the error set sustained by |w| <= w_max componentwise. */
MLIP_API mlip_status mlip_gains_invariant_box(const mlip_gains* gains,
                                              const mlip_s2s* s2s,
                                              const double w_max[2], double e_max[2]);
/* w_max may be NULL to omit the box from the document. */
MLIP_API mlip_status mlip_gains_to_json(const mlip_gains* gains, const mlip_s2s* s2s,
                                        const double w_max[2], char** json_out);
MLIP_API void mlip_gains_free(mlip_gains* gains);

/* ---- scenarios and simulation -------------------------------------------- */

MLIP_API mlip_status mlip_scenario_from_json(const char* json, mlip_scenario** out);
MLIP_API mlip_status mlip_scenario_to_json(const mlip_scenario* scenario,
                                           char** json_out);
MLIP_API void mlip_scenario_free(mlip_scenario* scenario);

/* Runs the closed loop. A diverged run still yields a trace handle; query
 * mlip_trace_diverged. */
MLIP_API mlip_status mlip_simulate(const mlip_scenario* scenario, mlip_trace** out);
MLIP_API mlip_status mlip_trace_diverged(const mlip_trace* trace, int* out);
MLIP_API mlip_status mlip_trace_samples_csv(const mlip_trace* trace, char** csv_out);
MLIP_API mlip_status mlip_trace_steps_csv(const mlip_trace* trace, char** csv_out);
MLIP_API mlip_status mlip_trace_metrics_json(const mlip_trace* trace, char** json_out);
MLIP_API void mlip_trace_free(mlip_trace* trace);

/* ---- experiment orchestration --------------------------------------------
 * kind: "simulate", "sweep", "push", "maxspeed", "figure". Writes CSV/JSON
 * artifacts under out_dir and returns the run metrics. exit_code_out gets
 * the CLI convention: 0 ok, 2 numerical failure (the status stays MLIP_OK
 * for a completed-but-failing run). */
MLIP_API mlip_status mlip_run(const char* kind, const char* config_json,
                              const char* out_dir, int* exit_code_out,
                              char** metrics_json_out);

#ifdef __cplusplus
}
#endif

#endif /* MLIP_MLIP_H_ */
