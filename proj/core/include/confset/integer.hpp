#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "confset/error.hpp"

namespace confset {

using Integer = mpz_class;

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 overflow in addition");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("int64 overflow in subtraction");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 overflow in multiplication");
  return r;
}

inline std::int64_t checked_neg(std::int64_t a) { return checked_sub(0, a); }

inline std::string to_string(const Integer& z) { return z.get_str(); }

inline std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) throw OverflowError("integer " + z.get_str() + " does not fit in int64");
  return z.get_si();
}

}  // namespace confset
