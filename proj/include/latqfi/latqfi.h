#ifndef LATQFI_H
#define LATQFI_H

/* C interface to the lattice QFI library. All entry points are thread-safe
 * per session; a session must not be shared between threads concurrently. */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lq_status {
  LQ_OK = 0,
  LQ_ERR_NON_HERMITIAN_INPUT = 1,
  LQ_ERR_CONVERGENCE_FAILURE = 2,
  LQ_ERR_INVALID_OCCUPATION = 3,
  LQ_ERR_INVALID_SIZE = 4,
  LQ_ERR_INVALID_PARAMS = 5,
  LQ_ERR_NEGATIVE_RESULT = 6,
  LQ_ERR_DEGENERATE_DISTRIBUTION = 7,
  LQ_ERR_STATE_CROSSING = 8,
  LQ_ERR_SHAPE_MISMATCH = 9,
  LQ_ERR_INVALID_Z = 10,
  LQ_ERR_INVALID_R = 11,
  LQ_ERR_OUTSIDE_TOPOLOGICAL_PHASE = 12,
  LQ_ERR_NO_GAP_ISOLATION = 13,
  LQ_ERR_NO_LOWER_BAND = 14,
  LQ_ERR_NON_MONOTONIC = 15,
  LQ_ERR_DIMENSION_MISMATCH = 16,
  LQ_ERR_NOT_A_PROJECTOR = 17,
  LQ_ERR_ODD_L = 18,
  LQ_ERR_AT_CRITICALITY = 19,
  LQ_ERR_GAPLESS_INPUT = 20,
  LQ_ERR_ALL_EXCLUDED = 21,
  LQ_ERR_ILL_CONDITIONED = 22,
  LQ_ERR_FLAT_LIKELIHOOD = 23,
  LQ_ERR_CONFIG = 24,
  LQ_ERR_INTERNAL = 25,
  /* lq_run only: the command ran but every emitted row carries an error flag;
   * the rendered table is still returned. */
  LQ_ERR_ALL_ROWS_FAILED = 100
} lq_status;

typedef struct lq_session lq_session;

lq_session* lq_session_create(void);
void lq_session_destroy(lq_session* session);

/* Message of the last failing call on this session; owned by the session,
 * valid until the next call. Empty string when no error occurred. */
const char* lq_session_error(const lq_session* session);

const char* lq_version(void);
const char* lq_status_name(lq_status status);

/* Run one command described by a JSON config (fields: command, model, method,
 * params, lambda_grid, sizes, output, format, seed, threads). On LQ_OK and
 * LQ_ERR_ALL_ROWS_FAILED, *output receives the rendered CSV or JSON; free it
 * with lq_string_free. */
lq_status lq_run(lq_session* session, const char* config_json, char** output);

/* Canonical form of a config (all fields present, sorted keys). */
lq_status lq_canonical_config(lq_session* session, const char* config_json, char** output);

void lq_string_free(char* text);

/* Closed-form scalars. Each writes its result through `out` and returns a
 * status; `out` is untouched on failure. */
lq_status lq_qfi_phi_z_closed_form(lq_session* session, double r, double dr_dlambda, int L,
                                   double* out);
lq_status lq_qfi_phi_z_complex(lq_session* session, double r, double theta, double dr_dlambda,
                               double dtheta_dlambda, int L, double* out);
lq_status lq_qfi_tpt_limit(lq_session* session, double dr_dlambda, double dtheta_dlambda, int L,
                           double* out);
lq_status lq_ssh_tpt_closed_form(lq_session* session, int L, double* out);
lq_status lq_ssh_continuum_limit(lq_session* session, double lambda, double* out);
lq_status lq_chern_tpt_sum(lq_session* session, int L, double t1, double t2, double* out);
lq_status lq_band_inversion_lowest_modes(lq_session* session, int L, double alpha, double lambda,
                                         double lambda_c, double* out);
lq_status lq_qfi_mode_upper_bound(lq_session* session, double dh_norm, double gap, double* out);

#ifdef __cplusplus
}
#endif

#endif /* LATQFI_H */
