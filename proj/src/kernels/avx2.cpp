#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "msdarcy/kernels.hpp"

namespace msdarcy::kernels {

namespace {

constexpr std::size_t W = 4;

inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

inline __m256d vslope(Limiter limiter, __m256d a, __m256d b) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d positive = _mm256_cmp_pd(_mm256_mul_pd(a, b), zero, _CMP_GT_OQ);
  __m256d s;
  if (limiter == Limiter::minmod) {
    const __m256d a_smaller = _mm256_cmp_pd(vabs(a), vabs(b), _CMP_LT_OQ);
    s = _mm256_blendv_pd(b, a, a_smaller);
  } else {
    const __m256d num = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), a), b);
    s = _mm256_div_pd(num, _mm256_add_pd(a, b));
  }
  return _mm256_blendv_pd(zero, s, positive);
}

inline double sslope(Limiter limiter, double a, double b) {
  if (limiter == Limiter::minmod) return a * b > 0.0 ? (std::fabs(a) < std::fabs(b) ? a : b) : 0.0;
  return a * b > 0.0 ? 2.0 * a * b / (a + b) : 0.0;
}

void reconstruct(Limiter limiter, const double* u, std::size_t faces, double* left, double* right) {
  std::size_t f = 0;
  if (limiter == Limiter::none) {
    for (; f + W <= faces; f += W) {
      _mm256_storeu_pd(left + f, _mm256_loadu_pd(u + f + 1));
      _mm256_storeu_pd(right + f, _mm256_loadu_pd(u + f + 2));
    }
    for (; f < faces; ++f) {
      left[f] = u[f + 1];
      right[f] = u[f + 2];
    }
    return;
  }
  const __m256d half = _mm256_set1_pd(0.5);
  for (; f + W <= faces; f += W) {
    const __m256d u0 = _mm256_loadu_pd(u + f);
    const __m256d u1 = _mm256_loadu_pd(u + f + 1);
    const __m256d u2 = _mm256_loadu_pd(u + f + 2);
    const __m256d u3 = _mm256_loadu_pd(u + f + 3);
    const __m256d sl = vslope(limiter, _mm256_sub_pd(u1, u0), _mm256_sub_pd(u2, u1));
    const __m256d sr = vslope(limiter, _mm256_sub_pd(u2, u1), _mm256_sub_pd(u3, u2));
    _mm256_storeu_pd(left + f, _mm256_add_pd(u1, _mm256_mul_pd(half, sl)));
    _mm256_storeu_pd(right + f, _mm256_sub_pd(u2, _mm256_mul_pd(half, sr)));
  }
  for (; f < faces; ++f) {
    const double sl = sslope(limiter, u[f + 1] - u[f], u[f + 2] - u[f + 1]);
    const double sr = sslope(limiter, u[f + 2] - u[f + 1], u[f + 3] - u[f + 2]);
    left[f] = u[f + 1] + 0.5 * sl;
    right[f] = u[f + 2] - 0.5 * sr;
  }
}

void wave_speed(std::size_t faces, const double* rL, const double* mL, const double* cL, const double* rR,
                const double* mR, const double* cR, double* lam) {
  std::size_t f = 0;
  for (; f + W <= faces; f += W) {
    const __m256d sl = _mm256_add_pd(vabs(_mm256_div_pd(_mm256_loadu_pd(mL + f), _mm256_loadu_pd(rL + f))),
                                     _mm256_loadu_pd(cL + f));
    const __m256d sr = _mm256_add_pd(vabs(_mm256_div_pd(_mm256_loadu_pd(mR + f), _mm256_loadu_pd(rR + f))),
                                     _mm256_loadu_pd(cR + f));
    _mm256_storeu_pd(lam + f, _mm256_max_pd(_mm256_loadu_pd(lam + f), _mm256_max_pd(sl, sr)));
  }
  for (; f < faces; ++f) {
    const double sl = std::fabs(mL[f] / rL[f]) + cL[f];
    const double sr = std::fabs(mR[f] / rR[f]) + cR[f];
    lam[f] = std::max(lam[f], std::max(sl, sr));
  }
}

void rusanov(std::size_t faces, const double* rL, const double* mL, const double* pL, const double* rR,
             const double* mR, const double* pR, const double* lam, double* mass_flux, double* momentum_flux) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t f = 0;
  for (; f + W <= faces; f += W) {
    const __m256d vrl = _mm256_loadu_pd(rL + f), vml = _mm256_loadu_pd(mL + f), vpl = _mm256_loadu_pd(pL + f);
    const __m256d vrr = _mm256_loadu_pd(rR + f), vmr = _mm256_loadu_pd(mR + f), vpr = _mm256_loadu_pd(pR + f);
    const __m256d hl = _mm256_mul_pd(half, _mm256_loadu_pd(lam + f));
    _mm256_storeu_pd(mass_flux + f, _mm256_sub_pd(_mm256_mul_pd(half, _mm256_add_pd(vml, vmr)),
                                                  _mm256_mul_pd(hl, _mm256_sub_pd(vrr, vrl))));
    const __m256d fl = _mm256_add_pd(_mm256_div_pd(_mm256_mul_pd(vml, vml), vrl), vpl);
    const __m256d fr = _mm256_add_pd(_mm256_div_pd(_mm256_mul_pd(vmr, vmr), vrr), vpr);
    _mm256_storeu_pd(momentum_flux + f, _mm256_sub_pd(_mm256_mul_pd(half, _mm256_add_pd(fl, fr)),
                                                      _mm256_mul_pd(hl, _mm256_sub_pd(vmr, vml))));
  }
  for (; f < faces; ++f) {
    const double hl = 0.5 * lam[f];
    mass_flux[f] = 0.5 * (mL[f] + mR[f]) - hl * (rR[f] - rL[f]);
    const double fl = mL[f] * mL[f] / rL[f] + pL[f];
    const double fr = mR[f] * mR[f] / rR[f] + pR[f];
    momentum_flux[f] = 0.5 * (fl + fr) - hl * (mR[f] - mL[f]);
  }
}

void flux_update(std::size_t cells, const double* u, const double* flux, double coef, double* out) {
  const __m256d vc = _mm256_set1_pd(coef);
  std::size_t c = 0;
  for (; c + W <= cells; c += W) {
    const __m256d df = _mm256_sub_pd(_mm256_loadu_pd(flux + c + 1), _mm256_loadu_pd(flux + c));
    _mm256_storeu_pd(out + c, _mm256_sub_pd(_mm256_loadu_pd(u + c), _mm256_mul_pd(vc, df)));
  }
  for (; c < cells; ++c) out[c] = u[c] - coef * (flux[c + 1] - flux[c]);
}

void average(std::size_t count, const double* a, const double* b, double* out) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t k = 0;
  for (; k + W <= count; k += W)
    _mm256_storeu_pd(out + k, _mm256_mul_pd(half, _mm256_add_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k))));
  for (; k < count; ++k) out[k] = 0.5 * (a[k] + b[k]);
}

bool solve_lane(std::size_t n, std::size_t count, std::size_t lane, double* a, double* b) {
  bool ok = true;
  auto A = [&](std::size_t r, std::size_t c) -> double& { return a[(r * n + c) * count + lane]; };
  auto B = [&](std::size_t r) -> double& { return b[r * count + lane]; };
  for (std::size_t k = 0; k < n; ++k) {
    const double piv = A(k, k);
    if (!(std::fabs(piv) > 0.0) || !std::isfinite(piv)) ok = false;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = A(i, k) / piv;
      for (std::size_t j = k + 1; j < n; ++j) A(i, j) = A(i, j) - f * A(k, j);
      B(i) = B(i) - f * B(k);
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = B(i);
    for (std::size_t j = i + 1; j < n; ++j) acc = acc - A(i, j) * B(j);
    B(i) = acc / A(i, i);
  }
  return ok;
}

bool solve2(std::size_t count, double* a, double* b) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d inf = _mm256_set1_pd(INFINITY);
  __m256d bad = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + W <= count; k += W) {
    const __m256d a00 = _mm256_loadu_pd(a + k), a01 = _mm256_loadu_pd(a + count + k);
    const __m256d a10 = _mm256_loadu_pd(a + 2 * count + k), a11 = _mm256_loadu_pd(a + 3 * count + k);
    const __m256d b0 = _mm256_loadu_pd(b + k), b1 = _mm256_loadu_pd(b + count + k);
    const __m256d det = _mm256_sub_pd(_mm256_mul_pd(a00, a11), _mm256_mul_pd(a01, a10));
    const __m256d mag = vabs(det);
    bad = _mm256_or_pd(bad, _mm256_cmp_pd(mag, zero, _CMP_NGT_UQ));
    bad = _mm256_or_pd(bad, _mm256_cmp_pd(mag, inf, _CMP_EQ_OQ));
    _mm256_storeu_pd(b + k, _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(b0, a11), _mm256_mul_pd(a01, b1)), det));
    _mm256_storeu_pd(b + count + k,
                     _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(a00, b1), _mm256_mul_pd(b0, a10)), det));
  }
  bool ok = _mm256_movemask_pd(bad) == 0;
  for (; k < count; ++k) {
    const double a00 = a[k], a01 = a[count + k], a10 = a[2 * count + k], a11 = a[3 * count + k];
    const double b0 = b[k], b1 = b[count + k];
    const double det = a00 * a11 - a01 * a10;
    if (!(std::fabs(det) > 0.0) || !std::isfinite(det)) ok = false;
    b[k] = (b0 * a11 - a01 * b1) / det;
    b[count + k] = (a00 * b1 - b0 * a10) / det;
  }
  return ok;
}

bool batched_solve(std::size_t n, std::size_t count, double* a, double* b) {
  if (n == 2) return solve2(count, a, b);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d inf = _mm256_set1_pd(INFINITY);
  __m256d bad = _mm256_setzero_pd();
  std::size_t lane = 0;
  for (; lane + W <= count; lane += W) {
    auto A = [&](std::size_t r, std::size_t c) { return a + (r * n + c) * count + lane; };
    auto B = [&](std::size_t r) { return b + r * count + lane; };
    for (std::size_t k = 0; k < n; ++k) {
      const __m256d piv = _mm256_loadu_pd(A(k, k));
      const __m256d mag = vabs(piv);
      // zero, NaN or infinite pivots
      bad = _mm256_or_pd(bad, _mm256_cmp_pd(mag, zero, _CMP_NGT_UQ));
      bad = _mm256_or_pd(bad, _mm256_cmp_pd(mag, inf, _CMP_EQ_OQ));
      for (std::size_t i = k + 1; i < n; ++i) {
        const __m256d f = _mm256_div_pd(_mm256_loadu_pd(A(i, k)), piv);
        for (std::size_t j = k + 1; j < n; ++j)
          _mm256_storeu_pd(A(i, j), _mm256_sub_pd(_mm256_loadu_pd(A(i, j)), _mm256_mul_pd(f, _mm256_loadu_pd(A(k, j)))));
        _mm256_storeu_pd(B(i), _mm256_sub_pd(_mm256_loadu_pd(B(i)), _mm256_mul_pd(f, _mm256_loadu_pd(B(k)))));
      }
    }
    for (std::size_t i = n; i-- > 0;) {
      __m256d acc = _mm256_loadu_pd(B(i));
      for (std::size_t j = i + 1; j < n; ++j)
        acc = _mm256_sub_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(A(i, j)), _mm256_loadu_pd(B(j))));
      _mm256_storeu_pd(B(i), _mm256_div_pd(acc, _mm256_loadu_pd(A(i, i))));
    }
  }
  bool ok = _mm256_movemask_pd(bad) == 0;
  for (; lane < count; ++lane) ok = solve_lane(n, count, lane, a, b) && ok;
  return ok;
}

}  // namespace

const KernelTable& avx2_table_impl() {
  static const KernelTable table{Isa::avx2, "avx2", reconstruct, wave_speed, rusanov,
                                 flux_update, average, batched_solve};
  return table;
}

}  // namespace msdarcy::kernels
