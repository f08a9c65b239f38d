#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "lvlab/liouville.hpp"

namespace lvlab {

// A point of D(A) x D(B), stored as its two factor points.
struct Point4 {
  Vec2 a;
  Vec2 b;
};

// Component p_i x D(B) (factor 0) or D(A) x q_j (factor 1), weighted by the face area.
struct ProductComponent {
  int factor = 0;
  int face = -1;
  double weight = 0.0;
};

class ProductPolarization {
public:
  ProductPolarization(LiouvilleForm2D a, LiouvilleForm2D b);

  const LiouvilleForm2D& factor(int k) const { return k == 0 ? a_ : b_; }
  const std::vector<ProductComponent>& components() const { return comps_; }

  // Covector components (dx1, dy1, dx2, dy2) and the Liouville vector.
  Vec4 lambda(const Point4& p) const;
  Vec4 X(const Point4& p) const;

private:
  LiouvilleForm2D a_, b_;
  std::vector<ProductComponent> comps_;
};

ProductPolarization product_polarization(const LiouvilleForm2D& a, const LiouvilleForm2D& b);

enum class Class4 { Basin, Skeleton, Undecided };

struct Classification4 {
  Class4 kind = Class4::Undecided;
  int component = -1;  // index into components() for Basin
  double time = 0.0;   // chart entry time for Basin
  std::string diagnostic;
};

// Forward product flow; the basin is the component whose chart is reached first.
Classification4 classify4(const ProductPolarization& p, const Point4& x, double t_max);

// Quadrature of the loop integral of lambda over a closed curve given by samples
// (uniform parameter, first point not repeated); a periodic spline interpolates them.
double action_integral(const ProductPolarization& p, const std::vector<Point4>& loop);

// Model symplectic disc bundle over a trivialized base chart with coordinates
// (u, v, R, theta): Theta = dtheta - (c1 / area) (u dv - v du) / 2,
// omega0 = (1 - c1 R / area) du ^ dv + dR ^ Theta, lambda0 = (R - area / c1) Theta.
struct ModelDiscBundle {
  int c1 = 1;
  double area = 1.0;
};

struct SdbValues {
  std::array<std::array<double, 4>, 4> omega{};  // omega(e_i, e_j)
  Vec4 lambda{};
  Vec4 liouville{};
  double det = 0.0;
};

// `point` is (u, v, R, theta).
SdbValues eval_sdb(const ModelDiscBundle& m, const Vec4& point);
// Loop integral of lambda0 over the fiber circle at (u, v, R).
double sdb_fiber_integral(const ModelDiscBundle& m, double u, double v, double R, int samples = 64);

struct Check4 {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
  std::string detail;
};

Check4 check_product_closedness(const ProductPolarization& p, int points, unsigned seed);
Check4 check_skeleton_dichotomy(const ProductPolarization& p, int points, double t_max, unsigned seed);
Check4 check_boundary_tangency(const ProductPolarization& p, int points, unsigned seed);
Check4 check_sdb_consistency(const ModelDiscBundle& m, int points, unsigned seed);

}  // namespace lvlab
