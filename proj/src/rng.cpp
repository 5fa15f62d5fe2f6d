#include "curvlab/rng.hpp"

#include <bit>
#include <cmath>

namespace curvlab {

namespace {
// High part has 20 trailing zero bits so exponent*LN2_HI is exact for any
// exponent a double can carry.
constexpr double LN2_HI = 6.93147180369123816490e-01;
constexpr double LN2_LO = 1.90821492927058770002e-10;
constexpr double SQRT2 = 1.4142135623730951;
}  // namespace

double portable_log(double x) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
  int e = static_cast<int>((bits >> 52) & 0x7ff);
  if (e == 0) {  // subnormal: rescale (never hit by the u01 stream)
    bits = std::bit_cast<std::uint64_t>(x * 0x1.0p54);
    e = static_cast<int>((bits >> 52) & 0x7ff) - 54;
  }
  e -= 1023;
  double m = std::bit_cast<double>((bits & 0x000fffffffffffffull) | 0x3ff0000000000000ull);
  if (m > SQRT2) {
    m = m * 0.5;
    e += 1;
  }
  // log m = 2 atanh(s) with s = (m-1)/(m+1), |s| <= 0.1716; odd series
  // through s^15 leaves a remainder near 1e-14.
  const double s = (m - 1.0) / (m + 1.0);
  const double s2 = s * s;
  double p = 1.0 / 15.0;
  p = p * s2 + 1.0 / 13.0;
  p = p * s2 + 1.0 / 11.0;
  p = p * s2 + 1.0 / 9.0;
  p = p * s2 + 1.0 / 7.0;
  p = p * s2 + 1.0 / 5.0;
  p = p * s2 + 1.0 / 3.0;
  const double r = s2 * p;
  double lm = s + s * r;
  lm = lm + lm;
  const double de = static_cast<double>(e);
  return (de * LN2_HI + lm) + de * LN2_LO;
}

namespace {
constexpr double AK_A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                            -2.759285104469687e+02, 1.383577518672690e+02,
                            -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double AK_B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                            -1.556989798598866e+02, 6.680131188771972e+01,
                            -1.328068155288572e+01};
constexpr double AK_C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                            -2.400758277161838e+00, -2.549732539343734e+00,
                            4.374664141464968e+00,  2.938163982698783e+00};
constexpr double AK_D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                            2.445134137142996e+00, 3.754408661907416e+00};
constexpr double P_LOW = 0.02425;

double icdf_tail(double q) {
  const double num =
      ((((AK_C[0] * q + AK_C[1]) * q + AK_C[2]) * q + AK_C[3]) * q + AK_C[4]) * q +
      AK_C[5];
  const double den = (((AK_D[0] * q + AK_D[1]) * q + AK_D[2]) * q + AK_D[3]) * q + 1.0;
  return num / den;
}
}  // namespace

double normal_icdf(double u) {
  if (u < P_LOW) {
    const double q = std::sqrt(-2.0 * portable_log(u));
    return icdf_tail(q);
  }
  if (u > 1.0 - P_LOW) {
    // 1-u is exact here (both operands in [1/2, 1]), so the two tails are
    // mirror images bit for bit.
    const double q = std::sqrt(-2.0 * portable_log(1.0 - u));
    return -icdf_tail(q);
  }
  const double q = u - 0.5;
  const double r = q * q;
  const double num =
      (((((AK_A[0] * r + AK_A[1]) * r + AK_A[2]) * r + AK_A[3]) * r + AK_A[4]) * r +
       AK_A[5]) *
      q;
  const double den =
      ((((AK_B[0] * r + AK_B[1]) * r + AK_B[2]) * r + AK_B[3]) * r + AK_B[4]) * r + 1.0;
  return num / den;
}

}  // namespace curvlab
