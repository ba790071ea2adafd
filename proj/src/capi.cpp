#include "latqfi/latqfi.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "latqfi/edge.hpp"
#include "latqfi/errors.hpp"
#include "latqfi/many_body.hpp"
#include "latqfi/workflows.hpp"

struct lq_session {
  std::string last_error;
};

namespace {

lq_status status_from_code(latqfi::ErrorCode code) {
  // ErrorCode values mirror lq_status 1:1 below LQ_ERR_ALL_ROWS_FAILED.
  return static_cast<lq_status>(static_cast<int>(code));
}

char* dup_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out != nullptr) std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

template <typename Fn>
lq_status guarded(lq_session* session, Fn&& fn) {
  if (session == nullptr) return LQ_ERR_INTERNAL;
  session->last_error.clear();
  try {
    return fn();
  } catch (const latqfi::Error& err) {
    session->last_error = err.what();
    return status_from_code(err.code());
  } catch (const std::exception& err) {
    session->last_error = err.what();
    return LQ_ERR_INTERNAL;
  } catch (...) {
    session->last_error = "unknown failure";
    return LQ_ERR_INTERNAL;
  }
}

lq_status scalar_out(double value, double* out) {
  if (out == nullptr) return LQ_ERR_INVALID_PARAMS;
  *out = value;
  return LQ_OK;
}

} // namespace

extern "C" {

lq_session* lq_session_create(void) {
  try {
    return new lq_session;
  } catch (...) {
    return nullptr;
  }
}

void lq_session_destroy(lq_session* session) { delete session; }

const char* lq_session_error(const lq_session* session) {
  return session == nullptr ? "" : session->last_error.c_str();
}

const char* lq_version(void) { return "1.0.0"; }

const char* lq_status_name(lq_status status) {
  if (status == LQ_OK) return "Ok";
  if (status == LQ_ERR_ALL_ROWS_FAILED) return "AllRowsFailed";
  const int code = static_cast<int>(status);
  if (code > 0 && code <= static_cast<int>(latqfi::ErrorCode::Internal))
    return latqfi::error_code_name(static_cast<latqfi::ErrorCode>(code));
  return "Unknown";
}

lq_status lq_run(lq_session* session, const char* config_json, char** output) {
  return guarded(session, [&]() -> lq_status {
    if (config_json == nullptr || output == nullptr)
      latqfi::raise(latqfi::ErrorCode::InvalidParams, "lq_run: null argument");
    latqfi::RunConfig cfg = latqfi::parse_run_config(config_json);
    latqfi::RunOutput result = latqfi::run_command(cfg);
    *output = dup_string(result.rendered);
    if (*output == nullptr)
      latqfi::raise(latqfi::ErrorCode::Internal, "lq_run: allocation failed");
    if (result.status == latqfi::RunStatus::AllRowsFailed) {
      session->last_error = "every row carries an error flag";
      return LQ_ERR_ALL_ROWS_FAILED;
    }
    return LQ_OK;
  });
}

lq_status lq_canonical_config(lq_session* session, const char* config_json, char** output) {
  return guarded(session, [&]() -> lq_status {
    if (config_json == nullptr || output == nullptr)
      latqfi::raise(latqfi::ErrorCode::InvalidParams, "lq_canonical_config: null argument");
    latqfi::RunConfig cfg = latqfi::parse_run_config(config_json);
    *output = dup_string(latqfi::canonical_config_json(cfg));
    if (*output == nullptr)
      latqfi::raise(latqfi::ErrorCode::Internal, "lq_canonical_config: allocation failed");
    return LQ_OK;
  });
}

void lq_string_free(char* text) { std::free(text); }

lq_status lq_qfi_phi_z_closed_form(lq_session* session, double r, double dr_dlambda, int L,
                                   double* out) {
  return guarded(session, [&] {
    return scalar_out(latqfi::qfi_phi_z_closed_form(r, dr_dlambda, L), out);
  });
}

lq_status lq_qfi_phi_z_complex(lq_session* session, double r, double theta, double dr_dlambda,
                               double dtheta_dlambda, int L, double* out) {
  return guarded(session, [&] {
    return scalar_out(latqfi::qfi_phi_z_complex(r, theta, dr_dlambda, dtheta_dlambda, L), out);
  });
}

lq_status lq_qfi_tpt_limit(lq_session* session, double dr_dlambda, double dtheta_dlambda, int L,
                           double* out) {
  return guarded(session, [&] {
    return scalar_out(latqfi::qfi_tpt_limit(dr_dlambda, dtheta_dlambda, L), out);
  });
}

lq_status lq_ssh_tpt_closed_form(lq_session* session, int L, double* out) {
  return guarded(session, [&] { return scalar_out(latqfi::ssh_tpt_closed_form(L), out); });
}

lq_status lq_ssh_continuum_limit(lq_session* session, double lambda, double* out) {
  return guarded(session, [&] { return scalar_out(latqfi::ssh_continuum_limit(lambda), out); });
}

lq_status lq_chern_tpt_sum(lq_session* session, int L, double t1, double t2, double* out) {
  return guarded(session, [&] { return scalar_out(latqfi::chern_tpt_sum(L, t1, t2), out); });
}

lq_status lq_band_inversion_lowest_modes(lq_session* session, int L, double alpha, double lambda,
                                         double lambda_c, double* out) {
  return guarded(session, [&] {
    return scalar_out(latqfi::band_inversion_lowest_modes(L, alpha, lambda, lambda_c), out);
  });
}

lq_status lq_qfi_mode_upper_bound(lq_session* session, double dh_norm, double gap, double* out) {
  return guarded(session, [&] {
    return scalar_out(latqfi::qfi_mode_upper_bound(dh_norm, gap), out);
  });
}

} // extern "C"
