#include <algorithm>
#include <cmath>

#include "msdarcy/kernels.hpp"

namespace msdarcy::kernels {

namespace {

inline double slope(Limiter limiter, double a, double b) {
  switch (limiter) {
    case Limiter::minmod:
      return a * b > 0.0 ? (std::fabs(a) < std::fabs(b) ? a : b) : 0.0;
    case Limiter::van_leer:
      return a * b > 0.0 ? 2.0 * a * b / (a + b) : 0.0;
    case Limiter::none:
      break;
  }
  return 0.0;
}

void reconstruct(Limiter limiter, const double* u, std::size_t faces, double* left, double* right) {
  if (limiter == Limiter::none) {
    for (std::size_t f = 0; f < faces; ++f) {
      left[f] = u[f + 1];
      right[f] = u[f + 2];
    }
    return;
  }
  for (std::size_t f = 0; f < faces; ++f) {
    const double sl = slope(limiter, u[f + 1] - u[f], u[f + 2] - u[f + 1]);
    const double sr = slope(limiter, u[f + 2] - u[f + 1], u[f + 3] - u[f + 2]);
    left[f] = u[f + 1] + 0.5 * sl;
    right[f] = u[f + 2] - 0.5 * sr;
  }
}

void wave_speed(std::size_t faces, const double* rL, const double* mL, const double* cL, const double* rR,
                const double* mR, const double* cR, double* lam) {
  for (std::size_t f = 0; f < faces; ++f) {
    const double sl = std::fabs(mL[f] / rL[f]) + cL[f];
    const double sr = std::fabs(mR[f] / rR[f]) + cR[f];
    lam[f] = std::max(lam[f], std::max(sl, sr));
  }
}

void rusanov(std::size_t faces, const double* rL, const double* mL, const double* pL, const double* rR,
             const double* mR, const double* pR, const double* lam, double* mass_flux, double* momentum_flux) {
  for (std::size_t f = 0; f < faces; ++f) {
    const double hl = 0.5 * lam[f];
    mass_flux[f] = 0.5 * (mL[f] + mR[f]) - hl * (rR[f] - rL[f]);
    const double fl = mL[f] * mL[f] / rL[f] + pL[f];
    const double fr = mR[f] * mR[f] / rR[f] + pR[f];
    momentum_flux[f] = 0.5 * (fl + fr) - hl * (mR[f] - mL[f]);
  }
}

void flux_update(std::size_t cells, const double* u, const double* flux, double coef, double* out) {
  for (std::size_t c = 0; c < cells; ++c) out[c] = u[c] - coef * (flux[c + 1] - flux[c]);
}

void average(std::size_t count, const double* a, const double* b, double* out) {
  for (std::size_t k = 0; k < count; ++k) out[k] = 0.5 * (a[k] + b[k]);
}

// Cramer's rule for 2x2 systems; symmetric under relabelling the two
// unknowns, so swapping species permutes the solution bit for bit.
bool solve2(std::size_t count, double* a, double* b) {
  bool ok = true;
  for (std::size_t k = 0; k < count; ++k) {
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
  bool ok = true;
  for (std::size_t lane = 0; lane < count; ++lane) {
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
  }
  return ok;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::scalar, "scalar", reconstruct, wave_speed, rusanov,
                                 flux_update, average,  batched_solve};
  return table;
}

}  // namespace msdarcy::kernels
