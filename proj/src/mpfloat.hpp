#pragma once

// Thin RAII wrapper over MPFR reals, internal to the library. Only the
// handful of operations needed by the extended-precision summations are
// exposed; everything rounds to nearest.

#include <mpfr.h>

#include <cassert>
#include <climits>
#include <utility>

namespace hetphase::detail {

class MpFloat {
public:
  explicit MpFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  MpFloat(double x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
  MpFloat(const MpFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  MpFloat(MpFloat&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
  MpFloat& operator=(const MpFloat& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  MpFloat& operator=(MpFloat&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~MpFloat() { mpfr_clear(v_); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long exponent() const { return mpfr_zero_p(v_) ? LONG_MIN : mpfr_get_exp(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }

  MpFloat& set(double x) { mpfr_set_d(v_, x, MPFR_RNDN); return *this; }
  MpFloat& add(const MpFloat& a, const MpFloat& b) { mpfr_add(v_, a.v_, b.v_, MPFR_RNDN); return *this; }
  MpFloat& sub(const MpFloat& a, const MpFloat& b) { mpfr_sub(v_, a.v_, b.v_, MPFR_RNDN); return *this; }
  MpFloat& mul(const MpFloat& a, const MpFloat& b) { mpfr_mul(v_, a.v_, b.v_, MPFR_RNDN); return *this; }
  MpFloat& div(const MpFloat& a, const MpFloat& b) { mpfr_div(v_, a.v_, b.v_, MPFR_RNDN); return *this; }
  MpFloat& mul_d(const MpFloat& a, double b) { mpfr_mul_d(v_, a.v_, b, MPFR_RNDN); return *this; }
  MpFloat& mul_2si(const MpFloat& a, long e) { mpfr_mul_2si(v_, a.v_, e, MPFR_RNDN); return *this; }
  MpFloat& div_ui(const MpFloat& a, unsigned long b) { mpfr_div_ui(v_, a.v_, b, MPFR_RNDN); return *this; }
  MpFloat& neg(const MpFloat& a) { mpfr_neg(v_, a.v_, MPFR_RNDN); return *this; }
  MpFloat& sqrt(const MpFloat& a) { mpfr_sqrt(v_, a.v_, MPFR_RNDN); return *this; }
  MpFloat& exp(const MpFloat& a) { mpfr_exp(v_, a.v_, MPFR_RNDN); return *this; }
  MpFloat& abs(const MpFloat& a) { mpfr_abs(v_, a.v_, MPFR_RNDN); return *this; }
  MpFloat& set_pi() { mpfr_const_pi(v_, MPFR_RNDN); return *this; }

  /// *this += a * b without a temporary.
  MpFloat& fma_acc(const MpFloat& a, const MpFloat& b) { mpfr_fma(v_, a.v_, b.v_, v_, MPFR_RNDN); return *this; }

  int cmpabs(const MpFloat& o) const { return mpfr_cmpabs(v_, o.v_); }
  int cmp_d(double x) const { return mpfr_cmp_d(v_, x); }

private:
  mpfr_t v_;
};

} // namespace hetphase::detail
