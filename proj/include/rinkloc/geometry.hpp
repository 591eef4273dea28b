#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <span>

#include "rinkloc/errors.hpp"

namespace rinkloc {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

// Four points in control-point order (see control_points()).
template <typename Scalar>
using Quad = std::array<Point2<Scalar>, 4>;

using Point2d = Point2<double>;
using Quadd = Quad<double>;

template <typename Scalar>
struct GeometryTolerance {
  // Relative to the Frobenius norm of the matrix involved.
  static constexpr Scalar kSingular = Scalar(1e-12);
  // Triangle area relative to the bounding-box area of the point set.
  static constexpr Scalar kCollinear = Scalar(1e-9);
};

struct FrameDims {
  int width = 1280;
  int height = 720;

  FrameDims() = default;
  FrameDims(int w, int h) : width(w), height(h) {
    if (w < 1 || h < 1) throw InputError("frame dimensions must be positive");
  }
  bool operator==(const FrameDims&) const = default;
};

// Top-view rink template in model pixels. 400 x 170 is 2 px per foot of a
// 200 x 85 ft rink.
struct RinkModel {
  double width = 400.0;
  double height = 170.0;

  RinkModel() = default;
  RinkModel(double w, double h) : width(w), height(h) {
    if (!(w > 0.0) || !(h > 0.0)) throw InputError("rink model dimensions must be positive");
  }
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Canonical representative of the projective class of `m`: unit Frobenius
/// norm, m(2,2) >= 0 when it is not negligible, otherwise the first nonzero
/// entry (row-major) is positive.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> canonicalize(const Eigen::Matrix<Scalar, 3, 3>& m) {
  const Scalar norm = m.norm();
  if (!(norm > Scalar(0)) || !std::isfinite(norm)) throw NumericalFailure("homography has zero or non-finite norm");
  Eigen::Matrix<Scalar, 3, 3> c = m / norm;
  Scalar sign_ref = c(2, 2);
  if (std::abs(sign_ref) <= GeometryTolerance<Scalar>::kSingular) {
    sign_ref = Scalar(0);
    for (int r = 0; r < 3 && sign_ref == Scalar(0); ++r)
      for (int k = 0; k < 3; ++k)
        if (std::abs(c(r, k)) > GeometryTolerance<Scalar>::kSingular) {
          sign_ref = c(r, k);
          break;
        }
  }
  if (sign_ref < Scalar(0)) c = -c;
  return c;
}

/// Invertible plane projective transform, always held in canonical scale so
/// that two homographies compare equal iff their matrices do.
template <typename Scalar>
class Homography {
 public:
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

  Homography() : m_(canonicalize<Scalar>(Matrix3::Identity())) {}

  explicit Homography(const Matrix3& m) : m_(canonicalize<Scalar>(m)) {
    if (std::abs(m_.determinant()) <= GeometryTolerance<Scalar>::kSingular)
      throw NumericalFailure("singular homography");
  }

  static Homography identity() { return Homography(); }

  static Homography translation(Scalar tx, Scalar ty) {
    Matrix3 m = Matrix3::Identity();
    m(0, 2) = tx;
    m(1, 2) = ty;
    return Homography(m);
  }

  static Homography scaling(Scalar sx, Scalar sy) {
    Matrix3 m = Matrix3::Identity();
    m(0, 0) = sx;
    m(1, 1) = sy;
    return Homography(m);
  }

  // Row-major 9-element initializer.
  static Homography from_row_major(std::span<const Scalar> v) {
    if (v.size() != 9) throw InputError("homography needs 9 entries");
    Matrix3 m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = v[i];
    if (!m.allFinite()) throw InputError("homography has non-finite entries");
    return Homography(m);
  }

  const Matrix3& matrix() const { return m_; }
  Scalar operator()(int r, int c) const { return m_(r, c); }

  // Same transform scaled so that entry (2,2) is 1.
  Matrix3 unit_corner() const {
    if (std::abs(m_(2, 2)) <= GeometryTolerance<Scalar>::kSingular)
      throw IllConditioned("homography has vanishing (2,2) entry");
    return m_ / m_(2, 2);
  }

  std::array<Scalar, 9> row_major() const {
    std::array<Scalar, 9> out;
    for (int i = 0; i < 9; ++i) out[i] = m_(i / 3, i % 3);
    return out;
  }

  friend Homography operator*(const Homography& a, const Homography& b) {
    return Homography(Matrix3(a.m_ * b.m_));
  }

  bool operator==(const Homography& o) const { return m_ == o.m_; }

 private:
  Matrix3 m_;
};

using Homographyd = Homography<double>;

template <typename Scalar>
Scalar max_abs_diff(const Homography<Scalar>& a, const Homography<Scalar>& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

/// Fixed frame points whose rink-model images parameterize a frame's
/// homography: [(0, 0.6h), (0, h), (w, h), (w, 0.6h)].
template <typename Scalar = double>
Quad<Scalar> control_points(const FrameDims& dims) {
  const Scalar w = Scalar(dims.width);
  const Scalar h = Scalar(dims.height);
  const Scalar upper = Scalar(0.6) * h;
  return {Point2<Scalar>(0, upper), Point2<Scalar>(0, h), Point2<Scalar>(w, h), Point2<Scalar>(w, upper)};
}

template <typename Scalar>
Point2<Scalar> project(const Homography<Scalar>& h, const Point2<Scalar>& p) {
  const auto& m = h.matrix();
  const Scalar w = m(2, 0) * p.x() + m(2, 1) * p.y() + m(2, 2);
  if (std::abs(w) < GeometryTolerance<Scalar>::kSingular * m.norm())
    throw PointAtInfinity("point maps to infinity");
  return Point2<Scalar>((m(0, 0) * p.x() + m(0, 1) * p.y() + m(0, 2)) / w,
                        (m(1, 0) * p.x() + m(1, 1) * p.y() + m(1, 2)) / w);
}

template <typename Scalar>
Quad<Scalar> project(const Homography<Scalar>& h, const Quad<Scalar>& q) {
  Quad<Scalar> out;
  for (int i = 0; i < 4; ++i) {
    try {
      out[i] = project(h, q[i]);
    } catch (const PointAtInfinity&) {
      throw PointAtInfinity("point maps to infinity", i);
    }
  }
  return out;
}

template <typename Scalar>
Homography<Scalar> invert(const Homography<Scalar>& h) {
  const auto& m = h.matrix();
  if (std::abs(m.determinant()) <= GeometryTolerance<Scalar>::kSingular)
    throw NumericalFailure("cannot invert near-singular homography");
  return Homography<Scalar>(typename Homography<Scalar>::Matrix3(m.inverse()));
}

namespace detail {

template <typename Scalar>
Scalar cross(const Point2<Scalar>& o, const Point2<Scalar>& a, const Point2<Scalar>& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

template <typename Scalar>
void require_general_position(const Quad<Scalar>& q, const char* which) {
  for (const auto& p : q)
    if (!p.allFinite()) throw DegenerateConfiguration(std::string(which) + " has a non-finite point");
  Point2<Scalar> lo = q[0], hi = q[0];
  for (const auto& p : q) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Scalar bbox = (hi - lo).prod();
  constexpr int triples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (const auto& t : triples) {
    const Scalar area = std::abs(cross(q[t[0]], q[t[1]], q[t[2]])) / Scalar(2);
    if (!(area > GeometryTolerance<Scalar>::kCollinear * bbox))
      throw DegenerateConfiguration(std::string(which) + " has three collinear points");
  }
}

// Similarity taking the centroid to the origin and the mean distance to sqrt(2).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> hartley_normalization(const Quad<Scalar>& q) {
  Point2<Scalar> c = Point2<Scalar>::Zero();
  for (const auto& p : q) c += p;
  c /= Scalar(4);
  Scalar mean_dist = 0;
  for (const auto& p : q) mean_dist += (p - c).norm();
  mean_dist /= Scalar(4);
  const Scalar s = std::sqrt(Scalar(2)) / mean_dist;
  Eigen::Matrix<Scalar, 3, 3> t;
  t << s, 0, -s * c.x(), 0, s, -s * c.y(), 0, 0, 1;
  return t;
}

}  // namespace detail

/// Homography mapping each src[i] onto dst[i], from the normalized direct
/// linear transform on the four correspondences.
template <typename Scalar>
Homography<Scalar> dlt_homography(const Quad<Scalar>& src, const Quad<Scalar>& dst) {
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
  detail::require_general_position(src, "source");
  detail::require_general_position(dst, "destination");

  const Matrix3 t_src = detail::hartley_normalization(src);
  const Matrix3 t_dst = detail::hartley_normalization(dst);

  // 8 constraint rows padded with a zero row so the SVD is square and V is full.
  Eigen::Matrix<Scalar, 9, 9> a = Eigen::Matrix<Scalar, 9, 9>::Zero();
  for (int i = 0; i < 4; ++i) {
    const Eigen::Matrix<Scalar, 3, 1> s = t_src * src[i].homogeneous();
    const Eigen::Matrix<Scalar, 3, 1> d = t_dst * dst[i].homogeneous();
    const Scalar x = s.x() / s.z(), y = s.y() / s.z();
    const Scalar u = d.x() / d.z(), v = d.y() / d.z();
    a.row(2 * i) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
    a.row(2 * i + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
  }

  Eigen::JacobiSVD<Eigen::Matrix<Scalar, 9, 9>> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(7) > GeometryTolerance<Scalar>::kSingular * sv(0)))
    throw NumericalFailure("DLT system has no unique null vector");

  const Eigen::Matrix<Scalar, 9, 1> h = svd.matrixV().col(8);
  Matrix3 hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  return Homography<Scalar>(Matrix3(t_dst.inverse() * hn * t_src));
}

}  // namespace rinkloc
