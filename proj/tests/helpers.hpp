#pragma once

#include <cmath>

#include "doctest.h"
#include "latqfi/errors.hpp"

// Evaluates expr, requires that it throws latqfi::Error with the given code.
#define CHECK_RAISES(code_, expr)                                  \
  do {                                                             \
    bool caught_ = false;                                          \
    try {                                                          \
      (void)(expr);                                                \
    } catch (const latqfi::Error& e_) {                            \
      caught_ = true;                                              \
      CHECK(e_.code() == (code_));                                 \
    }                                                              \
    CHECK_MESSAGE(caught_, "expected error not raised: " #expr);   \
  } while (0)

inline bool rel_close(double x, double ref, double tol) {
  return std::abs(x - ref) <= tol * std::abs(ref);
}
