#pragma once

#include <cstddef>

namespace msdarcy::kernels {

enum class Isa { scalar, avx2 };

enum class Limiter { none, minmod, van_leer };

/// Data-parallel inner loops of the finite-volume solvers. Every variant
/// produces results bit-identical to the scalar reference.
struct KernelTable {
  Isa isa;
  const char* name;

  /// Face values from an extended cell array of length faces + 3 (two ghost
  /// cells on each side); face f lies between u_ext[f+1] and u_ext[f+2].
  void (*reconstruct)(Limiter limiter, const double* u_ext, std::size_t faces, double* left, double* right);

  /// lam[f] = max(lam[f], |mL/rL| + cL, |mR/rR| + cR).
  void (*wave_speed)(std::size_t faces, const double* rL, const double* mL, const double* cL, const double* rR,
                     const double* mR, const double* cR, double* lam);

  /// Rusanov flux of one isentropic species along x.
  void (*rusanov)(std::size_t faces, const double* rL, const double* mL, const double* pL, const double* rR,
                  const double* mR, const double* pR, const double* lam, double* mass_flux, double* momentum_flux);

  /// out[c] = u[c] - coef * (flux[c+1] - flux[c]).
  void (*flux_update)(std::size_t cells, const double* u, const double* flux, double coef, double* out);

  /// out[k] = 0.5 * (a[k] + b[k]).
  void (*average)(std::size_t count, const double* a, const double* b, double* out);

  /// Solves `count` independent n x n systems in place: Cramer's rule for
  /// n = 2, otherwise Gaussian elimination without pivoting (callers
  /// guarantee diagonal dominance). Layout is
  /// lane-minor: a[(r*n + c)*count + k], b[r*count + k]; the solution
  /// overwrites b. Returns false if any pivot is zero or non-finite.
  bool (*batched_solve)(std::size_t n, std::size_t count, double* a, double* b);
};

const KernelTable& scalar_table();

/// nullptr when the variant was not built or the CPU lacks AVX2.
const KernelTable* avx2_table();

/// The table used by the solvers: the widest supported variant unless the
/// environment variable MSDARCY_ISA=scalar forces the reference path.
const KernelTable& active();

}  // namespace msdarcy::kernels
