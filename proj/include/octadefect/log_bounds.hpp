#pragma once

// Certified comparisons involving logarithms, decided with directed-rounding
// MPFR arithmetic at increasing precision.

#include <mpfr.h>

#include <optional>

#include "octadefect/exact_linalg.hpp"

namespace octadefect {

namespace detail {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

}  // namespace detail

/// Decides size >= (1/2) · ln(x) / ln(ln(x)) for an integer x > e exactly.
/// Returns nothing only if no precision up to max_bits separates the sides.
inline std::optional<bool> at_least_half_log_over_loglog(const Integer& size, const Integer& x,
                                                         mpfr_prec_t max_bits = 8192) {
  require(x >= 3, "log bound needs x >= 3 so that ln ln x > 0");
  for (mpfr_prec_t prec = 64; prec <= max_bits; prec *= 2) {
    detail::Mpfr x_val(prec), log_lo(prec), log_hi(prec), loglog_lo(prec), loglog_hi(prec),
        rhs_lo(prec), rhs_hi(prec), s(prec);
    mpfr_set_z(x_val.get(), x.get_mpz_t(), MPFR_RNDN);
    // x is exactly representable only when prec is large enough; widen instead.
    if (mpfr_cmp_z(x_val.get(), x.get_mpz_t()) != 0) continue;
    mpfr_log(log_lo.get(), x_val.get(), MPFR_RNDD);
    mpfr_log(log_hi.get(), x_val.get(), MPFR_RNDU);
    mpfr_log(loglog_lo.get(), log_lo.get(), MPFR_RNDD);
    mpfr_log(loglog_hi.get(), log_hi.get(), MPFR_RNDU);
    // ln ln x > 0 for x >= 3, so the bounds below are ordered correctly.
    mpfr_div(rhs_lo.get(), log_lo.get(), loglog_hi.get(), MPFR_RNDD);
    mpfr_div(rhs_hi.get(), log_hi.get(), loglog_lo.get(), MPFR_RNDU);
    mpfr_div_2ui(rhs_lo.get(), rhs_lo.get(), 1, MPFR_RNDD);
    mpfr_div_2ui(rhs_hi.get(), rhs_hi.get(), 1, MPFR_RNDU);
    mpfr_set_z(s.get(), size.get_mpz_t(), MPFR_RNDN);
    if (mpfr_cmp_z(s.get(), size.get_mpz_t()) != 0) continue;
    if (mpfr_cmp(s.get(), rhs_hi.get()) >= 0) return true;
    if (mpfr_cmp(s.get(), rhs_lo.get()) < 0) return false;
  }
  return std::nullopt;
}

}  // namespace octadefect
