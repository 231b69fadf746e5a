#include "msdarcy/grid_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "msdarcy/errors.hpp"

namespace msdarcy {

std::size_t UniformGrid::points() const {
  std::size_t p = 1;
  for (std::size_t c : counts) p *= c;
  return p;
}

std::vector<double> UniformGrid::coordinates(std::size_t point) const {
  std::vector<double> x(dimension());
  for (std::size_t a = 0; a < dimension(); ++a) {
    const std::size_t i = point % counts[a];
    point /= counts[a];
    x[a] = lower[a] + static_cast<double>(i) * spacing[a];
  }
  return x;
}

void UniformGrid::validate() const {
  if (counts.empty()) throw DimensionError("UniformGrid: dimension must be >= 1");
  if (lower.size() != counts.size() || spacing.size() != counts.size())
    throw DimensionError("UniformGrid: counts, lower and spacing differ in length");
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (counts[a] < 3) throw DimensionError("UniformGrid: need at least 3 points per axis");
    if (!(spacing[a] > 0.0)) throw DimensionError("UniformGrid: spacing must be positive");
  }
}

UniformGrid UniformGrid::periodic(std::size_t d, std::size_t cells, double lo, double hi) {
  const double h = (hi - lo) / static_cast<double>(cells);
  return {std::vector<std::size_t>(d, cells), std::vector<double>(d, lo), std::vector<double>(d, h),
          BoundaryPolicy::periodic};
}

UniformGrid UniformGrid::nodes(std::size_t d, std::size_t nodes, double lo, double hi) {
  const double h = (hi - lo) / static_cast<double>(nodes - 1);
  return {std::vector<std::size_t>(d, nodes), std::vector<double>(d, lo), std::vector<double>(d, h),
          BoundaryPolicy::one_sided};
}

SampledField sample(const UniformGrid& grid, std::size_t components,
                    const std::function<std::vector<double>(const std::vector<double>&)>& f) {
  const std::size_t np = grid.points();
  SampledField out{components, std::vector<double>(components * np)};
  for (std::size_t p = 0; p < np; ++p) {
    const auto v = f(grid.coordinates(p));
    if (v.size() != components) throw DimensionError("sample: function returned wrong length");
    for (std::size_t c = 0; c < components; ++c) out.values[c * np + p] = v[c];
  }
  return out;
}

namespace {

// Second-order derivative along one axis of a single scalar component.
void partial(const UniformGrid& grid, const double* u, std::size_t axis, double* out) {
  const std::size_t np = grid.points();
  std::size_t stride = 1;
  for (std::size_t a = 0; a < axis; ++a) stride *= grid.counts[a];
  const std::size_t len = grid.counts[axis];
  const double inv2h = 1.0 / (2.0 * grid.spacing[axis]);
  for (std::size_t p = 0; p < np; ++p) {
    const std::size_t i = (p / stride) % len;
    const std::size_t base = p - i * stride;
    auto val = [&](std::size_t j) { return u[base + j * stride]; };
    if (i > 0 && i + 1 < len) {
      out[p] = (val(i + 1) - val(i - 1)) * inv2h;
    } else if (grid.boundary == BoundaryPolicy::periodic) {
      const std::size_t ip = (i + 1) % len;
      const std::size_t im = (i + len - 1) % len;
      out[p] = (val(ip) - val(im)) * inv2h;
    } else if (i == 0) {
      out[p] = (-3.0 * val(0) + 4.0 * val(1) - val(2)) * inv2h;
    } else {
      out[p] = (3.0 * val(len - 1) - 4.0 * val(len - 2) + val(len - 3)) * inv2h;
    }
  }
}

}  // namespace

SampledField grad_general(const UniformGrid& grid, const SampledField& f) {
  grid.validate();
  const std::size_t np = grid.points();
  const std::size_t d = grid.dimension();
  if (f.values.size() != f.components * np) throw DimensionError("grad_general: field size mismatch");
  SampledField g{f.components * d, std::vector<double>(f.components * d * np)};
  for (std::size_t i = 0; i < f.components; ++i)
    for (std::size_t a = 0; a < d; ++a)
      partial(grid, f.values.data() + i * np, a, g.values.data() + (i * d + a) * np);
  return g;
}

SampledField div_general(const UniformGrid& grid, const SampledField& v) {
  grid.validate();
  const std::size_t np = grid.points();
  const std::size_t d = grid.dimension();
  if (v.components % d != 0 || v.values.size() != v.components * np)
    throw DimensionError("div_general: field must have n*d components");
  const std::size_t n = v.components / d;
  SampledField out{n, std::vector<double>(n * np, 0.0)};
  std::vector<double> tmp(np);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < d; ++a) {
      partial(grid, v.values.data() + (i * d + a) * np, a, tmp.data());
      for (std::size_t p = 0; p < np; ++p) out.values[i * np + p] += tmp[p];
    }
  return out;
}

SampledField div_sum(const UniformGrid& grid, const SampledField& v) {
  const SampledField per = div_general(grid, v);
  const std::size_t np = grid.points();
  SampledField out{1, std::vector<double>(np, 0.0)};
  for (std::size_t i = 0; i < per.components; ++i)
    for (std::size_t p = 0; p < np; ++p) out.values[p] += per.values[i * np + p];
  return out;
}

CalculusResiduals verify_calculus_rules(const UniformGrid& grid, const CalculusFunctions& fns) {
  grid.validate();
  const std::size_t np = grid.points();
  const std::size_t d = grid.dimension();
  const std::size_t n = fns.n;
  const std::size_t m = fns.m;

  auto rel = [](const std::vector<double>& lhs, const std::vector<double>& rhs) {
    double diff = 0.0, scale = 1.0;
    for (std::size_t k = 0; k < lhs.size(); ++k) {
      diff = std::max(diff, std::abs(lhs[k] - rhs[k]));
      scale = std::max(scale, std::abs(lhs[k]));
    }
    return diff / scale;
  };

  CalculusResiduals res;

  // grad(alpha a) against a (x) grad(alpha) + alpha grad(a)
  {
    const auto alpha = sample(grid, 1, [&](const std::vector<double>& x) { return std::vector<double>{fns.alpha(x)}; });
    const auto a = sample(grid, n, fns.a);
    SampledField prod{n, std::vector<double>(n * np)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t p = 0; p < np; ++p) prod.values[i * np + p] = alpha.values[p] * a.values[i * np + p];
    const auto lhs = grad_general(grid, prod);
    const auto ga = grad_general(grid, a);
    const auto galpha = grad_general(grid, alpha);
    std::vector<double> rhs(n * d * np);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t p = 0; p < np; ++p)
          rhs[(i * d + k) * np + p] =
              a.values[i * np + p] * galpha.values[k * np + p] + alpha.values[p] * ga.values[(i * d + k) * np + p];
    res.product_rule = rel(lhs.values, rhs);
  }

  // grad(c(b)) against (D_b c (x) I_d) grad(b)
  {
    const auto b = sample(grid, n, fns.b);
    const auto cb = sample(grid, m, [&](const std::vector<double>& x) { return fns.c(fns.b(x)); });
    const auto lhs = grad_general(grid, cb);
    const auto gb = grad_general(grid, b);
    std::vector<double> rhs(m * d * np, 0.0);
    std::vector<double> bp(n);
    for (std::size_t p = 0; p < np; ++p) {
      for (std::size_t j = 0; j < n; ++j) bp[j] = b.values[j * np + p];
      const auto jac = fns.dc(bp);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < d; ++k) {
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += jac[i * n + j] * gb.values[(j * d + k) * np + p];
          rhs[(i * d + k) * np + p] = acc;
        }
    }
    res.chain_rule = rel(lhs.values, rhs);
  }
  return res;
}

CalculusResiduals verify_calculus_rules(const UniformGrid& grid) {
  CalculusFunctions f;
  f.n = 2;
  f.m = 2;
  if (grid.boundary == BoundaryPolicy::periodic) {
    // 2*pi-periodic in each coordinate when the grid spans one period.
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> period(grid.dimension());
    for (std::size_t a = 0; a < grid.dimension(); ++a)
      period[a] = two_pi / (grid.spacing[a] * static_cast<double>(grid.counts[a]));
    auto s = [period](const std::vector<double>& x) {
      double acc = 0.0;
      for (std::size_t a = 0; a < x.size(); ++a) acc += period[a] * x[a];
      return acc;
    };
    f.alpha = [s](const std::vector<double>& x) { return 2.0 + std::sin(s(x)); };
    f.a = [s](const std::vector<double>& x) { return std::vector<double>{std::cos(s(x)), std::sin(2.0 * s(x))}; };
    f.b = [s](const std::vector<double>& x) { return std::vector<double>{std::sin(s(x)), std::cos(s(x))}; };
  } else {
    auto s = [](const std::vector<double>& x) {
      double acc = 0.0;
      for (double xi : x) acc += xi;
      return acc;
    };
    f.alpha = [s](const std::vector<double>& x) { return 1.0 + s(x); };
    f.a = [s](const std::vector<double>& x) { return std::vector<double>{s(x) * s(x), x[0] * s(x) * s(x)}; };
    f.b = [s](const std::vector<double>& x) { return std::vector<double>{s(x), x[0] * x[0] + s(x) * s(x) * s(x)}; };
  }
  f.c = [](const std::vector<double>& b) { return std::vector<double>{b[0] * b[1], b[0] * b[0] + b[1]}; };
  f.dc = [](const std::vector<double>& b) { return std::vector<double>{b[1], b[0], 2.0 * b[0], 1.0}; };
  return verify_calculus_rules(grid, f);
}

}  // namespace msdarcy
