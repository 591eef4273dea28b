#pragma once

#include <algorithm>
#include <vector>

#include "rinkloc/geometry.hpp"

namespace rinkloc {

template <typename Scalar>
using Polygon = std::vector<Point2<Scalar>>;

// Shoelace formula; positive for counter-clockwise vertex order.
template <typename Scalar>
Scalar signed_area(const Polygon<Scalar>& poly) {
  Scalar twice = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % n];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return twice / Scalar(2);
}

template <typename Scalar>
Scalar area(const Polygon<Scalar>& poly) {
  return std::abs(signed_area(poly));
}

template <typename Scalar>
Polygon<Scalar> counter_clockwise(Polygon<Scalar> poly) {
  if (signed_area(poly) < Scalar(0)) std::reverse(poly.begin(), poly.end());
  return poly;
}

template <typename Scalar>
Polygon<Scalar> rectangle(Scalar x0, Scalar y0, Scalar x1, Scalar y1) {
  return {Point2<Scalar>(x0, y0), Point2<Scalar>(x1, y0), Point2<Scalar>(x1, y1), Point2<Scalar>(x0, y1)};
}

namespace detail {

// One Sutherland-Hodgman pass: keeps the part where side(p) >= 0, for a side
// function that is affine in p.
template <typename Scalar, typename Side>
Polygon<Scalar> clip_by(const Polygon<Scalar>& in, Side side) {
  Polygon<Scalar> out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const Point2<Scalar>& cur = in[i];
    const Point2<Scalar>& prev = in[(i + in.size() - 1) % in.size()];
    const Scalar s_cur = side(cur);
    const Scalar s_prev = side(prev);
    if (s_cur >= Scalar(0)) {
      if (s_prev < Scalar(0)) out.push_back(prev + (cur - prev) * (s_prev / (s_prev - s_cur)));
      out.push_back(cur);
    } else if (s_prev >= Scalar(0)) {
      out.push_back(prev + (cur - prev) * (s_prev / (s_prev - s_cur)));
    }
  }
  return out;
}

}  // namespace detail

/// Sutherland-Hodgman: clips `subject` against the convex polygon `clip`.
/// Both must be counter-clockwise. An empty result means no overlap.
template <typename Scalar>
Polygon<Scalar> clip_polygon(const Polygon<Scalar>& subject, const Polygon<Scalar>& clip) {
  Polygon<Scalar> out = subject;
  const std::size_t n = clip.size();
  for (std::size_t e = 0; e < n && !out.empty(); ++e) {
    const Point2<Scalar>& a = clip[e];
    const Point2<Scalar>& b = clip[(e + 1) % n];
    out = detail::clip_by(out, [&](const Point2<Scalar>& p) { return detail::cross(a, b, p); });
  }
  return out;
}

// Part of `subject` where a*x + b*y + c >= 0.
template <typename Scalar>
Polygon<Scalar> clip_half_plane(const Polygon<Scalar>& subject, Scalar a, Scalar b, Scalar c) {
  return detail::clip_by(subject, [&](const Point2<Scalar>& p) { return a * p.x() + b * p.y() + c; });
}

/// Intersection over union of two convex polygons (any orientation).
template <typename Scalar>
Scalar convex_iou(const Polygon<Scalar>& a, const Polygon<Scalar>& b) {
  const Polygon<Scalar> ca = counter_clockwise(a);
  const Polygon<Scalar> cb = counter_clockwise(b);
  const Scalar area_a = area(ca);
  const Scalar area_b = area(cb);
  const Polygon<Scalar> inter = clip_polygon(ca, cb);
  const Scalar area_i = inter.size() >= 3 ? area(inter) : Scalar(0);
  const Scalar uni = area_a + area_b - area_i;
  if (!(uni > Scalar(0))) throw DegenerateQuad("union of polygons has zero area");
  return std::clamp(area_i / uni, Scalar(0), Scalar(1));
}

}  // namespace rinkloc
