#include "lvlab/spline.hpp"

#include <algorithm>
#include <cmath>

namespace lvlab {

namespace {

// Thomas algorithm; a = sub, b = diag, c = super (a[0], c[n-1] unused).
std::vector<double> solve_tridiagonal(std::vector<double> a, std::vector<double> b,
                                      std::vector<double> c, std::vector<double> r) {
  const std::size_t n = b.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    r[i] -= w * r[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = r[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (r[i] - c[i] * x[i + 1]) / b[i];
  return x;
}

// Cyclic tridiagonal solve via Sherman-Morrison; alpha = A[n-1][0], beta = A[0][n-1].
std::vector<double> solve_cyclic(const std::vector<double>& a, std::vector<double> b,
                                 const std::vector<double>& c, const std::vector<double>& r,
                                 double alpha, double beta) {
  const std::size_t n = b.size();
  const double gamma = -b[0];
  b[0] -= gamma;
  b[n - 1] -= alpha * beta / gamma;
  std::vector<double> x = solve_tridiagonal(a, b, c, r);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  std::vector<double> z = solve_tridiagonal(a, b, c, u);
  const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
  for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
  return x;
}

}  // namespace

CubicSpline::CubicSpline(std::vector<double> t, const std::vector<double>& y, End end)
    : t_(std::move(t)), end_(end) {
  const std::size_t n = t_.size();
  if (n < 2 || y.size() != n)
    throw Error(ErrorKind::Precondition, "spline", "need at least two samples");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(t_[i + 1] > t_[i]))
      throw Error(ErrorKind::Precondition, "spline", "knots must increase strictly");

  const std::size_t m = n - 1;  // number of pieces
  std::vector<double> h(m), d(m);
  for (std::size_t i = 0; i < m; ++i) {
    h[i] = t_[i + 1] - t_[i];
    d[i] = (y[i + 1] - y[i]) / h[i];
  }
  std::vector<double> M(n, 0.0);

  if (end == End::Periodic) {
    if (m < 3) throw Error(ErrorKind::Precondition, "spline", "periodic spline needs 3 pieces");
    std::vector<double> a(m), b(m), c(m), r(m);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t im = (i + m - 1) % m;
      a[i] = h[im];
      b[i] = 2.0 * (h[im] + h[i]);
      c[i] = h[i];
      r[i] = 6.0 * (d[i] - d[im]);
    }
    const double alpha = h[m - 1];  // A[m-1][0] = h_{m-1}
    const double beta = h[m - 1];   // A[0][m-1] = h_{m-1}
    std::vector<double> x = solve_cyclic(a, b, c, r, alpha, beta);
    for (std::size_t i = 0; i < m; ++i) M[i] = x[i];
    M[m] = M[0];
  } else if (n == 3) {
    const double s2 = 2.0 * (d[1] - d[0]) / (h[0] + h[1]);
    M = {s2, s2, s2};
  } else if (n >= 4) {
    const std::size_t k = n - 2;  // unknowns M_1..M_{n-2}
    std::vector<double> a(k, 0.0), b(k, 0.0), c(k, 0.0), r(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t i = j + 1;
      a[j] = h[i - 1];
      b[j] = 2.0 * (h[i - 1] + h[i]);
      c[j] = h[i];
      r[j] = 6.0 * (d[i] - d[i - 1]);
    }
    // not-a-knot: M_0 = ((h0+h1) M_1 - h0 M_2) / h1
    b[0] += h[0] * (h[0] + h[1]) / h[1];
    c[0] -= h[0] * h[0] / h[1];
    // M_{n-1} = ((h_{n-3}+h_{n-2}) M_{n-2} - h_{n-2} M_{n-3}) / h_{n-3}
    const double hp = h[m - 2], hl = h[m - 1];
    b[k - 1] += hl * (hp + hl) / hp;
    a[k - 1] -= hl * hl / hp;
    std::vector<double> x = solve_tridiagonal(a, b, c, r);
    for (std::size_t j = 0; j < k; ++j) M[j + 1] = x[j];
    M[0] = ((h[0] + h[1]) * M[1] - h[0] * M[2]) / h[1];
    M[n - 1] = ((hp + hl) * M[n - 2] - hl * M[n - 3]) / hp;
  }

  coef_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    coef_[i] = {y[i], d[i] - h[i] * (2.0 * M[i] + M[i + 1]) / 6.0, 0.5 * M[i],
                (M[i + 1] - M[i]) / (6.0 * h[i])};
  }
}

double CubicSpline::wrap(double s) const {
  if (end_ != End::Periodic) return s;
  const double t0 = t_.front(), len = t_.back() - t_.front();
  double u = std::fmod(s - t0, len);
  if (u < 0) u += len;
  return t0 + u;
}

std::size_t CubicSpline::locate(double s) const {
  s = wrap(s);
  auto it = std::upper_bound(t_.begin(), t_.end(), s);
  std::size_t k = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  return std::min(k, coef_.size() - 1);
}

double CubicSpline::value(double s) const {
  s = wrap(s);
  const std::size_t k = locate(s);
  return poly3(coef_[k], s - t_[k]);
}

double CubicSpline::derivative(double s) const {
  s = wrap(s);
  const std::size_t k = locate(s);
  return dpoly3(coef_[k], s - t_[k]);
}

double CubicSpline::second_derivative(double s) const {
  s = wrap(s);
  const std::size_t k = locate(s);
  const auto& c = coef_[k];
  return 2.0 * c[2] + 6.0 * c[3] * (s - t_[k]);
}

SplineCurve2::SplineCurve2(const std::vector<Vec2>& pts) {
  std::vector<double> t(pts.size(), 0.0), xs(pts.size()), ys(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    xs[i] = pts[i].x;
    ys[i] = pts[i].y;
    if (i > 0) t[i] = t[i - 1] + norm(pts[i] - pts[i - 1]);
  }
  x_ = CubicSpline(t, xs, CubicSpline::End::NotAKnot);
  y_ = CubicSpline(t, ys, CubicSpline::End::NotAKnot);
}

SplineCurve4::SplineCurve4(const std::vector<double>& t, const std::vector<Vec4>& pts, bool closed)
    : closed_(closed) {
  std::vector<double> tt = t;
  std::vector<Vec4> p = pts;
  if (closed) {
    if (p.empty()) throw Error(ErrorKind::Precondition, "spline", "empty curve");
    p.push_back(p.front());
  }
  for (int c = 0; c < 4; ++c) {
    std::vector<double> v(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) v[i] = p[i][c];
    c_[c] = CubicSpline(tt, v, closed ? CubicSpline::End::Periodic : CubicSpline::End::NotAKnot);
  }
}

Vec4 SplineCurve4::point(double s) const {
  return {c_[0].value(s), c_[1].value(s), c_[2].value(s), c_[3].value(s)};
}

Vec4 SplineCurve4::tangent(double s) const {
  return {c_[0].derivative(s), c_[1].derivative(s), c_[2].derivative(s), c_[3].derivative(s)};
}

}  // namespace lvlab
