#include <immintrin.h>

#include <cmath>

#include "curvlab/rng.hpp"
#include "curvlab/simd/kernels.hpp"

// Four-lane replicas of the reference kernels. Every floating expression
// mirrors kernels_scalar.cpp operation for operation (no FMA, same constants,
// same evaluation order), which is what makes the outputs bit-identical.
// This translation unit is the only one compiled with -mavx2; nothing here
// runs unless the dispatch saw AVX2 support.

namespace curvlab::simd::detail {

namespace {

inline __m256i mul64(__m256i a, __m256i b) {
  const __m256i lo = _mm256_mul_epu32(a, b);
  const __m256i ahi = _mm256_srli_epi64(a, 32);
  const __m256i bhi = _mm256_srli_epi64(b, 32);
  const __m256i cross =
      _mm256_add_epi64(_mm256_mul_epu32(ahi, b), _mm256_mul_epu32(a, bhi));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix64_v(__m256i x) {
  x = _mm256_xor_si256(x, _mm256_srli_epi64(x, 30));
  x = mul64(x, _mm256_set1_epi64x(static_cast<long long>(0xbf58476d1ce4e5b9ull)));
  x = _mm256_xor_si256(x, _mm256_srli_epi64(x, 27));
  x = mul64(x, _mm256_set1_epi64x(static_cast<long long>(0x94d049bb133111ebull)));
  x = _mm256_xor_si256(x, _mm256_srli_epi64(x, 31));
  return x;
}

// exact double(k) for 0 <= k < 2^52
inline __m256d u52_to_pd(__m256i k) {
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000ll);
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(k, magic)),
                       _mm256_set1_pd(0x1.0p52));
}

inline __m256d u01_v(__m256i bits) {
  const __m256d dk = u52_to_pd(_mm256_srli_epi64(bits, 12));
  return _mm256_mul_pd(_mm256_add_pd(dk, _mm256_set1_pd(0.5)),
                       _mm256_set1_pd(0x1.0p-52));
}

inline __m256d log_v(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  __m256i ebias = _mm256_and_si256(_mm256_srli_epi64(bits, 52),
                                   _mm256_set1_epi64x(0x7ff));
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffll)),
      _mm256_set1_epi64x(0x3ff0000000000000ll)));
  const __m256d big =
      _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  ebias = _mm256_add_epi64(
      ebias, _mm256_and_si256(_mm256_castpd_si256(big), _mm256_set1_epi64x(1)));
  const __m256d e =
      _mm256_sub_pd(u52_to_pd(ebias), _mm256_set1_pd(1023.0));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s2 = _mm256_mul_pd(s, s);
  __m256d p = _mm256_set1_pd(1.0 / 15.0);
  p = _mm256_add_pd(_mm256_mul_pd(p, s2), _mm256_set1_pd(1.0 / 13.0));
  p = _mm256_add_pd(_mm256_mul_pd(p, s2), _mm256_set1_pd(1.0 / 11.0));
  p = _mm256_add_pd(_mm256_mul_pd(p, s2), _mm256_set1_pd(1.0 / 9.0));
  p = _mm256_add_pd(_mm256_mul_pd(p, s2), _mm256_set1_pd(1.0 / 7.0));
  p = _mm256_add_pd(_mm256_mul_pd(p, s2), _mm256_set1_pd(1.0 / 5.0));
  p = _mm256_add_pd(_mm256_mul_pd(p, s2), _mm256_set1_pd(1.0 / 3.0));
  const __m256d r = _mm256_mul_pd(s2, p);
  __m256d lm = _mm256_add_pd(s, _mm256_mul_pd(s, r));
  lm = _mm256_add_pd(lm, lm);
  const __m256d ln2hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2lo = _mm256_set1_pd(1.90821492927058770002e-10);
  return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(e, ln2hi), lm),
                       _mm256_mul_pd(e, ln2lo));
}

inline __m256d horner5_v(__m256d x, const double c[6]) {
  __m256d p = _mm256_set1_pd(c[0]);
  for (int i = 1; i < 6; ++i)
    p = _mm256_add_pd(_mm256_mul_pd(p, x), _mm256_set1_pd(c[i]));
  return p;
}

inline __m256d icdf_v(__m256d u) {
  static constexpr double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double B[6] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01, 1.0};
  static constexpr double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double D[5] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00, 1.0};
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d plow = _mm256_set1_pd(0.02425);
  const __m256d phigh = _mm256_set1_pd(1.0 - 0.02425);

  const __m256d lowm = _mm256_cmp_pd(u, plow, _CMP_LT_OQ);
  const __m256d highm = _mm256_cmp_pd(u, phigh, _CMP_GT_OQ);

  // central branch
  const __m256d q = _mm256_sub_pd(u, _mm256_set1_pd(0.5));
  const __m256d r = _mm256_mul_pd(q, q);
  const __m256d numc = _mm256_mul_pd(horner5_v(r, A), q);
  const __m256d denc = horner5_v(r, B);
  const __m256d xc = _mm256_div_pd(numc, denc);

  // tail branch; idle lanes get a harmless argument
  __m256d ut = _mm256_set1_pd(0.25);
  ut = _mm256_blendv_pd(ut, u, lowm);
  ut = _mm256_blendv_pd(ut, _mm256_sub_pd(one, u), highm);
  const __m256d qt =
      _mm256_sqrt_pd(_mm256_mul_pd(_mm256_set1_pd(-2.0), log_v(ut)));
  __m256d dent = _mm256_set1_pd(D[0]);
  for (int i = 1; i < 5; ++i)
    dent = _mm256_add_pd(_mm256_mul_pd(dent, qt), _mm256_set1_pd(D[i]));
  const __m256d xt = _mm256_div_pd(horner5_v(qt, C), dent);

  __m256d x = xc;
  x = _mm256_blendv_pd(x, xt, lowm);
  const __m256d neg_xt =
      _mm256_xor_pd(xt, _mm256_set1_pd(-0.0));
  x = _mm256_blendv_pd(x, neg_xt, highm);
  return x;
}

inline __m256d table_eval_v(const RatioTable& tb, __m256d rq) {
  const __m256d x = _mm256_max_pd(rq, _mm256_set1_pd(tb.clamp_lo));
  const __m256d seg_a = _mm256_cmp_pd(x, _mm256_set1_pd(tb.b_lo), _CMP_LT_OQ);
  const __m256d ua =
      _mm256_mul_pd(_mm256_sub_pd(x, _mm256_set1_pd(tb.a_lo)), _mm256_set1_pd(tb.a_inv_dr));
  const __m256d ub =
      _mm256_mul_pd(_mm256_sub_pd(x, _mm256_set1_pd(tb.b_lo)), _mm256_set1_pd(tb.b_inv_dr));
  const __m256d u = _mm256_blendv_pd(ub, ua, seg_a);

  // 32-bit lane mask matching seg_a (low half of each 64-bit lane)
  const __m256i pick = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
  const __m128i seg32 = _mm256_castsi256_si128(
      _mm256_permutevar8x32_epi32(_mm256_castpd_si256(seg_a), pick));

  __m128i i32 = _mm256_cvttpd_epi32(u);
  const __m128i nmax = _mm_blendv_epi8(_mm_set1_epi32(tb.b_n - 2),
                                       _mm_set1_epi32(tb.a_n - 2), seg32);
  i32 = _mm_min_epi32(i32, nmax);
  i32 = _mm_max_epi32(i32, _mm_setzero_si128());
  const __m256d th = _mm256_sub_pd(u, _mm256_cvtepi32_pd(i32));
  const __m128i base =
      _mm_blendv_epi8(_mm_set1_epi32(tb.a_n), _mm_setzero_si128(), seg32);
  const __m128i idx0 = _mm_add_epi32(base, i32);
  const __m128i idx1 = _mm_add_epi32(idx0, _mm_set1_epi32(1));

  const __m256d v0 = _mm256_i32gather_pd(tb.val.data(), idx0, 8);
  const __m256d v1 = _mm256_i32gather_pd(tb.val.data(), idx1, 8);
  const __m256d s0 = _mm256_i32gather_pd(tb.sdr.data(), idx0, 8);
  const __m256d s1 = _mm256_i32gather_pd(tb.sdr.data(), idx1, 8);

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d om = _mm256_sub_pd(one, th);
  const __m256d two_th = _mm256_mul_pd(_mm256_set1_pd(2.0), th);
  const __m256d omom = _mm256_mul_pd(om, om);
  const __m256d h00 = _mm256_mul_pd(_mm256_add_pd(one, two_th), omom);
  const __m256d h10 = _mm256_mul_pd(th, omom);
  const __m256d thth = _mm256_mul_pd(th, th);
  const __m256d h01 = _mm256_mul_pd(thth, _mm256_sub_pd(_mm256_set1_pd(3.0), two_th));
  const __m256d h11 = _mm256_mul_pd(thth, _mm256_sub_pd(th, one));
  return _mm256_add_pd(
      _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(v0, h00), _mm256_mul_pd(s0, h10)),
                    _mm256_mul_pd(v1, h01)),
      _mm256_mul_pd(s1, h11));
}

void em_block4(const EmParams& p, std::uint64_t first_path, PathResult* out) {
  alignas(32) long long keys[4];
  for (int l = 0; l < 4; ++l)
    keys[l] = static_cast<long long>(
        rng_path_key(p.seed, first_path + static_cast<std::uint64_t>(l)));
  const __m256i keyv = _mm256_load_si256(reinterpret_cast<const __m256i*>(keys));

  __m256d r = _mm256_set1_pd(p.r0);
  __m256d active = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
  const __m256d dtv = _mm256_set1_pd(p.dt);
  const __m256d sqdtv = _mm256_set1_pd(p.sqrt_dt);
  const __m256d scalev = _mm256_set1_pd(p.drift_scale);
  const __m256d zero = _mm256_setzero_pd();

  for (int l = 0; l < 4; ++l) out[l].status = PathStatus::alive;

  for (std::int64_t k = 0; k < p.n_steps; ++k) {
    const std::uint64_t cbits =
        (static_cast<std::uint64_t>(k) + 1) * 0x9e3779b97f4a7c15ull;
    const __m256i draw =
        mix64_v(_mm256_add_epi64(keyv, _mm256_set1_epi64x(static_cast<long long>(cbits))));
    const __m256d z = icdf_v(u01_v(draw));
    const __m256d drift = _mm256_mul_pd(scalev, table_eval_v(*p.table, r));
    __m256d rnew =
        _mm256_add_pd(_mm256_add_pd(r, _mm256_mul_pd(drift, dtv)), _mm256_mul_pd(sqdtv, z));
    if (p.reflect_at_zero) {
      const __m256d negm = _mm256_cmp_pd(rnew, zero, _CMP_LT_OQ);
      const __m256d absr = _mm256_andnot_pd(_mm256_set1_pd(-0.0), rnew);
      rnew = _mm256_blendv_pd(rnew, absr, negm);
    }
    r = _mm256_blendv_pd(r, rnew, active);

    __m256d absorbed = zero;
    if (p.absorb_radius >= 0.0)
      absorbed = _mm256_and_pd(
          active, _mm256_cmp_pd(rnew, _mm256_set1_pd(p.absorb_radius), _CMP_LE_OQ));
    __m256d exploded = _mm256_and_pd(
        active, _mm256_cmp_pd(rnew, _mm256_set1_pd(p.explosion_radius), _CMP_GE_OQ));
    exploded = _mm256_andnot_pd(absorbed, exploded);
    __m256d escaped = _mm256_and_pd(
        active, _mm256_cmp_pd(rnew, _mm256_set1_pd(p.domain_max), _CMP_GT_OQ));
    escaped = _mm256_andnot_pd(absorbed, _mm256_andnot_pd(exploded, escaped));

    const __m256d trig = _mm256_or_pd(_mm256_or_pd(absorbed, exploded), escaped);
    const int tm = _mm256_movemask_pd(trig);
    if (tm) {
      alignas(32) double rbuf[4];
      _mm256_store_pd(rbuf, rnew);
      const int ma = _mm256_movemask_pd(absorbed);
      const int me = _mm256_movemask_pd(exploded);
      const double t_now = static_cast<double>(k + 1) * p.dt;
      for (int l = 0; l < 4; ++l) {
        if (!(tm & (1 << l))) continue;
        PathStatus stv = PathStatus::domain_exit;
        if (ma & (1 << l))
          stv = PathStatus::absorbed;
        else if (me & (1 << l))
          stv = PathStatus::exploded;
        out[l] = {stv, t_now, rbuf[l]};
      }
      active = _mm256_andnot_pd(trig, active);
      if (!_mm256_movemask_pd(active)) return;
    }
  }

  alignas(32) double rbuf[4];
  _mm256_store_pd(rbuf, r);
  const int am = _mm256_movemask_pd(active);
  const double horizon = static_cast<double>(p.n_steps) * p.dt;
  for (int l = 0; l < 4; ++l)
    if (am & (1 << l)) out[l] = {PathStatus::alive, horizon, rbuf[l]};
}

}  // namespace

void em_paths_avx2(const EmParams& p, std::uint64_t first_path, std::int64_t count,
                   PathResult* out) {
  std::int64_t n = 0;
  for (; n + 4 <= count; n += 4)
    em_block4(p, first_path + static_cast<std::uint64_t>(n), out + n);
  if (n < count)
    em_paths_scalar(p, first_path + static_cast<std::uint64_t>(n), count - n, out + n);
}

void lb_apply_avx2(const LbGrid& g) {
  const double inv2du = 1.0 / (2.0 * g.du);
  const double inv2dv = 1.0 / (2.0 * g.dv);
  const __m256d vi2du = _mm256_set1_pd(inv2du);
  const __m256d vi2dv = _mm256_set1_pd(inv2dv);
  const int nu = g.nu, nv = g.nv;
  auto id = [nv](int i, int j) { return static_cast<std::size_t>(i) * nv + j; };

  for (int i = 1; i + 1 < nu; ++i) {
    int j = 1;
    for (; j + 4 <= nv - 1; j += 4) {
      const std::size_t c = id(i, j);
      const __m256d fx = _mm256_mul_pd(
          _mm256_sub_pd(_mm256_loadu_pd(g.f + id(i + 1, j)),
                        _mm256_loadu_pd(g.f + id(i - 1, j))),
          vi2du);
      const __m256d fy = _mm256_mul_pd(
          _mm256_sub_pd(_mm256_loadu_pd(g.f + c + 1), _mm256_loadu_pd(g.f + c - 1)),
          vi2dv);
      const __m256d w11 = _mm256_loadu_pd(g.w11 + c);
      const __m256d w12 = _mm256_loadu_pd(g.w12 + c);
      const __m256d w22 = _mm256_loadu_pd(g.w22 + c);
      _mm256_storeu_pd(g.pu + c,
                       _mm256_add_pd(_mm256_mul_pd(w11, fx), _mm256_mul_pd(w12, fy)));
      _mm256_storeu_pd(g.pv + c,
                       _mm256_add_pd(_mm256_mul_pd(w12, fx), _mm256_mul_pd(w22, fy)));
    }
    for (; j + 1 < nv; ++j) {
      const double fx = (g.f[id(i + 1, j)] - g.f[id(i - 1, j)]) * inv2du;
      const double fy = (g.f[id(i, j + 1)] - g.f[id(i, j - 1)]) * inv2dv;
      g.pu[id(i, j)] = g.w11[id(i, j)] * fx + g.w12[id(i, j)] * fy;
      g.pv[id(i, j)] = g.w12[id(i, j)] * fx + g.w22[id(i, j)] * fy;
    }
  }

  for (int i = 2; i + 2 < nu; ++i) {
    int j = 2;
    for (; j + 4 <= nv - 2; j += 4) {
      const std::size_t c = id(i, j);
      const __m256d dpu = _mm256_mul_pd(
          _mm256_sub_pd(_mm256_loadu_pd(g.pu + id(i + 1, j)),
                        _mm256_loadu_pd(g.pu + id(i - 1, j))),
          vi2du);
      const __m256d dpv = _mm256_mul_pd(
          _mm256_sub_pd(_mm256_loadu_pd(g.pv + c + 1), _mm256_loadu_pd(g.pv + c - 1)),
          vi2dv);
      _mm256_storeu_pd(g.out + c, _mm256_div_pd(_mm256_add_pd(dpu, dpv),
                                                _mm256_loadu_pd(g.sqrtg + c)));
    }
    for (; j + 2 < nv; ++j) {
      const double div = (g.pu[id(i + 1, j)] - g.pu[id(i - 1, j)]) * inv2du +
                         (g.pv[id(i, j + 1)] - g.pv[id(i, j - 1)]) * inv2dv;
      g.out[id(i, j)] = div / g.sqrtg[id(i, j)];
    }
  }
}

}  // namespace curvlab::simd::detail
