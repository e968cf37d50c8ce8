#pragma once

#include <complex>

#include "doctest.h"

inline double rel_diff(std::complex<double> got, std::complex<double> want) {
  const double scale = std::abs(want);
  return scale == 0.0 ? std::abs(got) : std::abs(got - want) / scale;
}

#define CHECK_REL(got, want, tol)                                                   \
  do {                                                                              \
    const auto got_ = (got);                                                        \
    const auto want_ = (want);                                                      \
    INFO("got " << got_ << " want " << want_);                                      \
    CHECK(rel_diff(got_, want_) <= (tol));                                          \
  } while (0)
