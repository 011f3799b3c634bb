#include "qmcopt/highprec.hpp"

#include <mpfr.h>

namespace qmcopt {

double normal_cdf_highprec(double x) {
  // Phi(x) = erfc(-x / sqrt(2)) / 2
  constexpr mpfr_prec_t prec = 256;
  mpfr_t t, r;
  mpfr_init2(t, prec);
  mpfr_init2(r, prec);
  mpfr_set_d(t, -x, MPFR_RNDN);
  mpfr_sqrt_ui(r, 2, MPFR_RNDN);
  mpfr_div(t, t, r, MPFR_RNDN);
  mpfr_erfc(r, t, MPFR_RNDN);
  mpfr_div_ui(r, r, 2, MPFR_RNDN);
  const double out = mpfr_get_d(r, MPFR_RNDN);
  mpfr_clear(t);
  mpfr_clear(r);
  return out;
}

}  // namespace qmcopt
