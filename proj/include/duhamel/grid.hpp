#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "duhamel/errors.hpp"

namespace duhamel {

/// Uniform 1-D cell grid on [x_min, x_max], cell centers x_i = x_min + (i+1/2)h.
struct Grid {
  double x_min = 0.0;
  double x_max = 1.0;
  int n = 2;
  double h = 0.5;

  static Grid make(double x_min, double x_max, int n);
  double center(int i) const { return x_min + (i + 0.5) * h; }
  bool operator==(const Grid&) const = default;

  /// Index of the cell whose center is nearest to x (clamped into range).
  int nearest_cell(double x) const;
};

/// Values of a bounded function on a grid, extended by constants outside
/// [x_min, x_max]. Models bounded, possibly non-integrable data: far fields
/// need not vanish.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Grid grid, std::vector<double> values, double far_left, double far_right);

  static GridFunction zero(const Grid& g) { return constant(g, 0.0); }
  static GridFunction constant(const Grid& g, double c);
  static GridFunction sample(const Grid& g, const std::function<double(double)>& f,
                             double far_left, double far_right);

  const Grid& grid() const { return grid_; }
  int n() const { return grid_.n; }
  double h() const { return grid_.h; }
  double far_left() const { return far_left_; }
  double far_right() const { return far_right_; }
  void set_far_fields(double fl, double fr) { far_left_ = fl; far_right_ = fr; }

  double operator[](int i) const { return values_[i]; }
  double& operator[](int i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  /// Far-field-aware read at any integer cell index.
  double at_index(std::int64_t i) const {
    if (i < 0) return far_left_;
    if (i >= grid_.n) return far_right_;
    return values_[static_cast<std::size_t>(i)];
  }

  /// Piecewise-constant pointwise evaluation (cell value; far fields outside).
  double at(double x) const;

  /// x -> f(-x); the grid is negated and values reversed.
  GridFunction reflected() const;

  double min_value() const;
  double max_value() const;  // values only; far fields queried separately

  void write_csv(const std::string& path) const;
  static GridFunction read_csv(const std::string& path);

 private:
  Grid grid_;
  std::vector<double> values_;
  double far_left_ = 0.0;
  double far_right_ = 0.0;
};

struct Ball {
  double center = 0.0;
  double radius = 1.0;
};

/// h * sum over cells (centers inside the ball, whole domain when absent)
/// of |f_i|. Throws BallExceedsDomain when the ball pokes outside the grid.
double l1_norm(const GridFunction& f, const std::optional<Ball>& ball = std::nullopt);

/// h * sum over ball cells of max(f_i, 0) / of f_i * g_i (same grid).
double l1_positive_part(const GridFunction& f, const std::optional<Ball>& ball = std::nullopt);
double inner(const GridFunction& f, const GridFunction& g,
             const std::optional<Ball>& ball = std::nullopt);

/// sum_i |f_{i+1} - f_i| including the two far-field transitions.
double bv_seminorm(const GridFunction& f);

/// Discrete BV over a ball: |differences| across faces between cells whose
/// centers lie in the ball.
double bv_seminorm(const GridFunction& f, const Ball& ball);

/// Discrete convolution h * sum_j f(x_i - y_j) g(y_j). The kernel g must
/// carry zero far fields (KernelNotIntegrable otherwise) and share f's cell
/// width; f may have arbitrary far fields. The result lives on f's grid with
/// far fields scaled by the mass of g.
GridFunction convolve(const GridFunction& f, const GridFunction& g);

/// Pointwise lift u -> phi(u), far fields included.
GridFunction map_values(const GridFunction& f, const std::function<double(double)>& phi);

/// max_i |f_i - g_i| on a shared grid (far fields compared too).
double max_abs_diff(const GridFunction& f, const GridFunction& g);

}  // namespace duhamel
