#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace msdarcy {

enum class BoundaryPolicy { periodic, one_sided };

/// Uniform tensor-product grid in d dimensions. Point coordinates are
/// lower[a] + i*spacing[a]; periodic grids wrap index counts[a] to 0.
struct UniformGrid {
  std::vector<std::size_t> counts;
  std::vector<double> lower;
  std::vector<double> spacing;
  BoundaryPolicy boundary = BoundaryPolicy::one_sided;

  std::size_t dimension() const noexcept { return counts.size(); }
  std::size_t points() const;
  std::vector<double> coordinates(std::size_t point) const;
  void validate() const;

  /// Periodic grid of `cells` points per axis on [lo, hi)^d.
  static UniformGrid periodic(std::size_t d, std::size_t cells, double lo, double hi);
  /// Node grid of `nodes` points per axis on [lo, hi]^d.
  static UniformGrid nodes(std::size_t d, std::size_t nodes, double lo, double hi);
};

/// Field with `components` scalar components sampled on every grid point,
/// stored component-major: values[c * points + p].
struct SampledField {
  std::size_t components = 0;
  std::vector<double> values;

  double at(std::size_t component, std::size_t point, std::size_t points) const {
    return values[component * points + point];
  }
};

SampledField sample(const UniformGrid& grid, std::size_t components,
                    const std::function<std::vector<double>(const std::vector<double>&)>& f);

/// Stacked gradients: component i*d + a of the result is the a-th partial of f_i.
SampledField grad_general(const UniformGrid& grid, const SampledField& f);

/// Per-component divergence: input has n*d components, result has n with
/// result_i = sum_a partial_a v_{i*d+a}.
SampledField div_general(const UniformGrid& grid, const SampledField& v);

/// Scalar-sum divergence sum_i div(v_i): input n*d components, result one.
SampledField div_sum(const UniformGrid& grid, const SampledField& v);

struct CalculusResiduals {
  double product_rule = 0.0;
  double chain_rule = 0.0;
  double max() const { return product_rule > chain_rule ? product_rule : chain_rule; }
};

/// Discrete product and chain rules on built-in polynomial test functions
/// (trigonometric ones on periodic grids). Returns max relative residuals.
CalculusResiduals verify_calculus_rules(const UniformGrid& grid);

/// Same check on caller-supplied functions: alpha scalar, a in R^n, b in R^n,
/// c: R^n -> R^m with Jacobian dc (row-major m x n).
struct CalculusFunctions {
  std::size_t n = 1;
  std::size_t m = 1;
  std::function<double(const std::vector<double>&)> alpha;
  std::function<std::vector<double>(const std::vector<double>&)> a;
  std::function<std::vector<double>(const std::vector<double>&)> b;
  std::function<std::vector<double>(const std::vector<double>&)> c;
  std::function<std::vector<double>(const std::vector<double>&)> dc;
};

CalculusResiduals verify_calculus_rules(const UniformGrid& grid, const CalculusFunctions& fns);

}  // namespace msdarcy
