#ifndef DISCOP_NORMAL_HPP_
#define DISCOP_NORMAL_HPP_

namespace discop {

// Standard normal quantile function (inverse CDF).  Rational
// approximation in three regimes (central, tail, far tail); absolute
// error below 1e-9 over p in (1e-12, 1-1e-12), and in practice near
// machine precision.  Throws ValidationError for p outside (0, 1).
double normal_quantile(double p);

// Standard normal CDF via the complementary error function.
double normal_cdf(double x);

}  // namespace discop

#endif  // DISCOP_NORMAL_HPP_
