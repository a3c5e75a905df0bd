#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "serre/analytic.hpp"
#include "serre/physics.hpp"

namespace serre {

/// Uniform 1D mesh of P1 elements with lumped nodal measures. The local
/// relaxation length of node i is its lumped measure m_i.
class Mesh1D {
 public:
  Mesh1D(double x_min, double x_max, int n_elements)
      : x_min_(x_min), x_max_(x_max), n_elements_(n_elements) {
    if (n_elements < 2) throw std::invalid_argument("Mesh1D: need at least two elements");
    if (!(x_max > x_min)) throw std::invalid_argument("Mesh1D: empty domain");
    dx_ = (x_max - x_min) / n_elements;
    const std::size_t n = num_nodes();
    x_.resize(n);
    mass_.assign(n, dx_);
    for (std::size_t i = 0; i < n; ++i) x_[i] = x_min + dx_ * static_cast<double>(i);
    x_.back() = x_max;
    mass_.front() = mass_.back() = 0.5 * dx_;
  }

  std::size_t num_nodes() const { return static_cast<std::size_t>(n_elements_) + 1; }
  int num_elements() const { return n_elements_; }
  double dx() const { return dx_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double length() const { return x_max_ - x_min_; }

  const std::vector<double>& x() const { return x_; }
  double x(std::size_t i) const { return x_[i]; }
  const std::vector<double>& lumped_mass() const { return mass_; }
  double mass(std::size_t i) const { return mass_[i]; }
  double eps(std::size_t i) const { return mass_[i]; }

  /// Gradient coefficient c_ij = int phi_i dphi_j/dx for j = i +- 1.
  static constexpr double c_right = 0.5;
  static constexpr double c_left = -0.5;

  /// Lumped P1 gradient of a nodal field: (1/m_i) sum_j (f_j - f_i) c_ij.
  std::vector<double> gradient(const std::vector<double>& f) const {
    const std::size_t n = num_nodes();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      if (i + 1 < n) acc += (f[i + 1] - f[i]) * c_right;
      if (i > 0) acc += (f[i - 1] - f[i]) * c_left;
      out[i] = acc / mass_[i];
    }
    return out;
  }

  /// Index of the element containing x and the local coordinate in [0, 1].
  std::pair<std::size_t, double> locate(double x) const {
    if (x < x_min_ || x > x_max_) throw std::out_of_range("Mesh1D::locate: point outside domain");
    double s = (x - x_min_) / dx_;
    auto e = static_cast<std::size_t>(s);
    if (e >= static_cast<std::size_t>(n_elements_)) e = static_cast<std::size_t>(n_elements_) - 1;
    return {e, s - static_cast<double>(e)};
  }

 private:
  double x_min_;
  double x_max_;
  int n_elements_;
  double dx_ = 0.0;
  std::vector<double> x_;
  std::vector<double> mass_;
};

/// Nodal bathymetry sampled from a profile.
struct NodalBathymetry {
  std::vector<double> z;
  std::vector<double> dzdx;

  NodalBathymetry() = default;
  NodalBathymetry(const Mesh1D& mesh, const analytic::BathymetryProfile& profile) {
    const std::size_t n = mesh.num_nodes();
    z.resize(n);
    dzdx.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto s = profile(mesh.x(i));
      z[i] = s.z;
      dzdx[i] = s.dzdx;
    }
  }
};

/// Nodal conserved fields stored component-wise.
struct Fields {
  std::vector<double> h, q, q1, q2, q3;

  Fields() = default;
  explicit Fields(std::size_t n) : h(n, 0.0), q(n, 0.0), q1(n, 0.0), q2(n, 0.0), q3(n, 0.0) {}

  std::size_t size() const { return h.size(); }

  PrimitiveState at(std::size_t i) const { return {h[i], q[i], q1[i], q2[i], q3[i]}; }
  void set(std::size_t i, const PrimitiveState& s) {
    h[i] = s.h;
    q[i] = s.q;
    q1[i] = s.q1;
    q2[i] = s.q2;
    q3[i] = s.q3;
  }

  template <class F>
  void for_each_component(F&& f) {
    f(h);
    f(q);
    f(q1);
    f(q2);
    f(q3);
  }

  friend bool operator==(const Fields&, const Fields&) = default;
};

/// out = a * x + b * y, component-wise.
inline void lincomb(Fields& out, double a, const Fields& x, double b, const Fields& y) {
  const std::size_t n = x.size();
  if (out.size() != n) out = Fields(n);
  auto comb = [&](std::vector<double>& o, const std::vector<double>& xs,
                  const std::vector<double>& ys) {
    for (std::size_t i = 0; i < n; ++i) o[i] = a * xs[i] + b * ys[i];
  };
  comb(out.h, x.h, y.h);
  comb(out.q, x.q, y.q);
  comb(out.q1, x.q1, y.q1);
  comb(out.q2, x.q2, y.q2);
  comb(out.q3, x.q3, y.q3);
}

inline void lincomb(std::vector<double>& out, double a, const std::vector<double>& x, double b,
                    const std::vector<double>& y) {
  out.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
}

inline void lincomb(double& out, double a, double x, double b, double y) { out = a * x + b * y; }

}  // namespace serre
