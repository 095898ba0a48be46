#include "duhamel/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace duhamel {

Grid Grid::make(double x_min, double x_max, int n) {
  if (!(x_min < x_max)) fail(Errc::bad_argument, "grid: x_min must be below x_max");
  if (n < 2) fail(Errc::bad_argument, "grid: need at least two cells");
  Grid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n = n;
  g.h = (x_max - x_min) / n;
  return g;
}

int Grid::nearest_cell(double x) const {
  const double s = (x - x_min) / h - 0.5;
  const int i = static_cast<int>(std::llround(s));
  return std::clamp(i, 0, n - 1);
}

GridFunction::GridFunction(Grid grid, std::vector<double> values, double far_left, double far_right)
    : grid_(grid), values_(std::move(values)), far_left_(far_left), far_right_(far_right) {
  if (static_cast<int>(values_.size()) != grid_.n)
    fail(Errc::grid_mismatch, "grid function: value count differs from cell count");
  for (double v : values_)
    if (!std::isfinite(v)) fail(Errc::numerical_failure, "grid function: non-finite value");
  if (!std::isfinite(far_left_) || !std::isfinite(far_right_))
    fail(Errc::numerical_failure, "grid function: non-finite far field");
}

GridFunction GridFunction::constant(const Grid& g, double c) {
  return GridFunction(g, std::vector<double>(g.n, c), c, c);
}

GridFunction GridFunction::sample(const Grid& g, const std::function<double(double)>& f,
                                  double far_left, double far_right) {
  std::vector<double> v(g.n);
  for (int i = 0; i < g.n; ++i) v[i] = f(g.center(i));
  return GridFunction(g, std::move(v), far_left, far_right);
}

double GridFunction::at(double x) const {
  if (x < grid_.x_min) return far_left_;
  if (x >= grid_.x_max) return far_right_;
  int i = static_cast<int>(std::floor((x - grid_.x_min) / grid_.h));
  i = std::clamp(i, 0, grid_.n - 1);
  return values_[static_cast<std::size_t>(i)];
}

GridFunction GridFunction::reflected() const {
  Grid g = Grid::make(-grid_.x_max, -grid_.x_min, grid_.n);
  std::vector<double> v(values_.rbegin(), values_.rend());
  return GridFunction(g, std::move(v), far_right_, far_left_);
}

double GridFunction::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double GridFunction::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool ball_cells(const Grid& g, const std::optional<Ball>& ball, int& lo, int& hi) {
  if (!ball) {
    lo = 0;
    hi = g.n - 1;
    return true;
  }
  if (ball->center - ball->radius < g.x_min - 1e-12 * g.h ||
      ball->center + ball->radius > g.x_max + 1e-12 * g.h)
    fail(Errc::ball_exceeds_domain, "ball is not contained in the grid domain");
  lo = g.n;
  hi = -1;
  // cells by center membership |x_i - c| < r
  const double a = ball->center - ball->radius, b = ball->center + ball->radius;
  int first = static_cast<int>(std::ceil((a - g.x_min) / g.h - 0.5));
  first = std::max(first, 0);
  for (int i = first; i < g.n; ++i) {
    const double x = g.center(i);
    if (x >= b) break;
    if (x > a) {
      if (lo > i) lo = i;
      hi = i;
    }
  }
  return hi >= lo;
}

}  // namespace

double l1_norm(const GridFunction& f, const std::optional<Ball>& ball) {
  int lo, hi;
  if (!ball_cells(f.grid(), ball, lo, hi)) return 0.0;
  double s = 0.0;
  for (int i = lo; i <= hi; ++i) s += std::abs(f[i]);
  return f.h() * s;
}

double l1_positive_part(const GridFunction& f, const std::optional<Ball>& ball) {
  int lo, hi;
  if (!ball_cells(f.grid(), ball, lo, hi)) return 0.0;
  double s = 0.0;
  for (int i = lo; i <= hi; ++i) s += std::max(f[i], 0.0);
  return f.h() * s;
}

double inner(const GridFunction& f, const GridFunction& g, const std::optional<Ball>& ball) {
  if (!(f.grid() == g.grid())) fail(Errc::grid_mismatch, "inner: grids differ");
  int lo, hi;
  if (!ball_cells(f.grid(), ball, lo, hi)) return 0.0;
  double s = 0.0;
  for (int i = lo; i <= hi; ++i) s += f[i] * g[i];
  return f.h() * s;
}

double bv_seminorm(const GridFunction& f) {
  double s = std::abs(f[0] - f.far_left());
  for (int i = 0; i + 1 < f.n(); ++i) s += std::abs(f[i + 1] - f[i]);
  s += std::abs(f.far_right() - f[f.n() - 1]);
  return s;
}

double bv_seminorm(const GridFunction& f, const Ball& ball) {
  int lo, hi;
  if (!ball_cells(f.grid(), ball, lo, hi)) return 0.0;
  double s = 0.0;
  for (int i = lo; i < hi; ++i) s += std::abs(f[i + 1] - f[i]);
  return s;
}

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
  if (g.far_left() != 0.0 || g.far_right() != 0.0)
    fail(Errc::kernel_not_integrable, "convolution kernel must vanish at infinity");
  const double h = f.h();
  if (std::abs(g.h() - h) > 1e-12 * h)
    fail(Errc::grid_mismatch, "convolve: cell widths differ");

  const Grid& fg = f.grid();
  const Grid& gg = g.grid();
  const int n = fg.n;
  const int m = gg.n;
  std::vector<double> out(n, 0.0);
  // x_i - y_j = (fg.x_min - gg.x_min) + (i-j)h sits at f-cell index
  // k = (i-j) + K0 with K0 = -gg.x_min/h - 1/2. When K0 is an integer the
  // whole sum runs on the index lattice; otherwise fall back to pointwise
  // piecewise-constant reads.
  const double k0_real = -gg.x_min / h - 0.5;
  const std::int64_t k00 = std::llround(k0_real);
  const bool aligned = std::abs(k0_real - static_cast<double>(k00)) < 1e-9;

  if (aligned) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += f.at_index(i - j + k00) * g[j];
      out[i] = h * s;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      const double xi = fg.center(i);
      for (int j = 0; j < m; ++j) s += f.at(xi - gg.center(j)) * g[j];
      out[i] = h * s;
    }
  }

  double gmass = 0.0;
  for (int j = 0; j < m; ++j) gmass += g[j];
  gmass *= h;
  return GridFunction(fg, std::move(out), f.far_left() * gmass, f.far_right() * gmass);
}

GridFunction map_values(const GridFunction& f, const std::function<double(double)>& phi) {
  std::vector<double> v(f.values());
  for (double& x : v) x = phi(x);
  return GridFunction(f.grid(), std::move(v), phi(f.far_left()), phi(f.far_right()));
}

double max_abs_diff(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid())) fail(Errc::grid_mismatch, "max_abs_diff: grids differ");
  double m = std::max(std::abs(f.far_left() - g.far_left()), std::abs(f.far_right() - g.far_right()));
  for (int i = 0; i < f.n(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
  return m;
}

void GridFunction::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) fail(Errc::bad_argument, "cannot open for writing: " + path);
  os << "far_left=" << fmt_double(far_left_) << ",far_right=" << fmt_double(far_right_)
     << ",x_min=" << fmt_double(grid_.x_min) << ",x_max=" << fmt_double(grid_.x_max)
     << ",n=" << grid_.n << "\n";
  os << "x,value\n";
  for (int i = 0; i < grid_.n; ++i)
    os << fmt_double(grid_.center(i)) << "," << fmt_double(values_[i]) << "\n";
}

GridFunction GridFunction::read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(Errc::bad_argument, "cannot open for reading: " + path);
  std::string header;
  std::getline(is, header);
  double fl = 0, fr = 0, x_min = 0, x_max = 0;
  int n = 0;
  {
    std::stringstream ss(header);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) fail(Errc::bad_argument, "malformed grid csv header");
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      if (key == "far_left") fl = std::stod(val);
      else if (key == "far_right") fr = std::stod(val);
      else if (key == "x_min") x_min = std::stod(val);
      else if (key == "x_max") x_max = std::stod(val);
      else if (key == "n") n = std::stoi(val);
    }
  }
  std::string line;
  std::getline(is, line);  // column header
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(Errc::bad_argument, "malformed grid csv row");
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  return GridFunction(Grid::make(x_min, x_max, n), std::move(values), fl, fr);
}

}  // namespace duhamel
