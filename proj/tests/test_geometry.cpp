#include <doctest.h>

#include "oracles.hpp"
#include "rinkloc/geometry.hpp"

using namespace rinkloc;

namespace {

Quadd unit_square() { return {Point2d(0, 0), Point2d(1, 0), Point2d(1, 1), Point2d(0, 1)}; }

void check_point(const Point2d& p, double x, double y, double tol = 1e-12) {
  CHECK(p.x() == doctest::Approx(x).epsilon(tol));
  CHECK(p.y() == doctest::Approx(y).epsilon(tol));
}

}  // namespace

TEST_CASE("control points follow the fixed frame layout") {
  const auto hd = control_points(FrameDims(1280, 720));
  check_point(hd[0], 0, 432);
  check_point(hd[1], 0, 720);
  check_point(hd[2], 1280, 720);
  check_point(hd[3], 1280, 432);

  const auto unit = control_points(FrameDims(1, 1));
  check_point(unit[0], 0, 0.6);
  check_point(unit[1], 0, 1);
  check_point(unit[2], 1, 1);
  check_point(unit[3], 1, 0.6);

  const auto fhd = control_points(FrameDims(1920, 1080));
  check_point(fhd[0], 0, 648);
  check_point(fhd[3], 1920, 648);

  for (int w : {1, 7, 640, 1921})
    for (const auto& p : control_points(FrameDims(w, 333))) CHECK((p.x() == 0.0 || p.x() == double(w)));
}

TEST_CASE("frame dims reject non-positive sizes") {
  CHECK_THROWS_AS(FrameDims(0, 10), InputError);
  CHECK_THROWS_AS(FrameDims(10, -1), InputError);
}

TEST_CASE("canonical scale") {
  Eigen::Matrix3d m;
  m << 2, 0, 0, 0, 2, 0, 0, 0, -2;
  const Homographyd h(m);
  CHECK(h.matrix().norm() == doctest::Approx(1.0));
  CHECK(h(2, 2) > 0);
  CHECK(max_abs_diff(Homographyd(m), Homographyd(Eigen::Matrix3d(-5.0 * m))) < 1e-15);

  // Vanishing (2,2): the first nonzero entry fixes the sign.
  Eigen::Matrix3d z;
  z << 0, -1, 1, 1, 0, 0, 1, 1, 0;
  const Homographyd hz(z);
  CHECK(hz(0, 1) > 0);
}

TEST_CASE("singular matrices are rejected") {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(0, 0) = 1;
  m(1, 1) = 1;
  CHECK_THROWS_AS(Homographyd{m}, NumericalFailure);
}

TEST_CASE("dlt: identity and translation") {
  const Homographyd id = dlt_homography(unit_square(), unit_square());
  CHECK(max_abs_diff(id, Homographyd::identity()) < 1e-12);

  Quadd moved = unit_square();
  for (auto& p : moved) p += Point2d(2, 3);
  const Homographyd t = dlt_homography(unit_square(), moved);
  CHECK(max_abs_diff(t, Homographyd::translation(2, 3)) < 1e-12);
}

TEST_CASE("dlt: round trip on random homographies") {
  std::mt19937_64 rng(7);
  for (int seed = 0; seed < 1000; ++seed) {
    const Eigen::Matrix3d m = oracle::random_matrix(rng);
    const Quadd src = oracle::random_quad(rng);
    Quadd dst;
    for (int i = 0; i < 4; ++i) dst[i] = oracle::apply(m, src[i]);
    const Homographyd h = dlt_homography(src, dst);
    const Eigen::Matrix3d expected = oracle::normalized(m);
    REQUIRE((h.matrix() - expected).cwiseAbs().maxCoeff() < 1e-9);
    for (int i = 0; i < 4; ++i) {
      const Point2d p = project(h, src[i]);
      REQUIRE((p - dst[i]).norm() <= 1e-9 * std::max(1.0, dst[i].norm()));
    }
  }
}

TEST_CASE("dlt: scale of the generating matrix does not matter") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const Eigen::Matrix3d m = oracle::random_matrix(rng);
    const Quadd src = oracle::random_quad(rng);
    const double lambda = oracle::uniform(rng, -50, 50);
    Quadd a, b;
    for (int i = 0; i < 4; ++i) {
      a[i] = oracle::apply(m, src[i]);
      b[i] = oracle::apply(Eigen::Matrix3d(lambda * m), src[i]);
    }
    CHECK(max_abs_diff(dlt_homography(src, a), dlt_homography(src, b)) < 1e-12);
  }
}

TEST_CASE("dlt: collinear configurations are rejected") {
  Quadd line = {Point2d(0, 0), Point2d(1, 1), Point2d(2, 2), Point2d(0, 1)};
  CHECK_THROWS_AS(dlt_homography(line, unit_square()), DegenerateConfiguration);
  CHECK_THROWS_AS(dlt_homography(unit_square(), line), DegenerateConfiguration);

  Quadd repeated = unit_square();
  repeated[3] = repeated[0];
  CHECK_THROWS_AS(dlt_homography(repeated, unit_square()), DegenerateConfiguration);

  Quadd nan_point = unit_square();
  nan_point[1].x() = std::nan("");
  CHECK_THROWS_AS(dlt_homography(nan_point, unit_square()), DegenerateConfiguration);

  // The tolerance is relative: a tiny but well-shaped quad is fine.
  Quadd tiny = unit_square();
  for (auto& p : tiny) p *= 1e-6;
  CHECK_NOTHROW(dlt_homography(tiny, unit_square()));
}

TEST_CASE("project") {
  check_point(project(Homographyd::identity(), Point2d(5, 7)), 5, 7);
  check_point(project(Homographyd::scaling(2, 2), Point2d(1, 1)), 2, 2);
  check_point(project(Homographyd::translation(2, 3), Point2d(0, 0)), 2, 3);

  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(2, 0) = 1;
  m(2, 2) = -1;
  const Homographyd h(m);
  CHECK_THROWS_AS(project(h, Point2d(1, 5)), PointAtInfinity);
  const Quadd q = {Point2d(0, 0), Point2d(1, 5), Point2d(2, 2), Point2d(3, 3)};
  try {
    project(h, q);
    FAIL("expected PointAtInfinity");
  } catch (const PointAtInfinity& e) {
    CHECK(e.point_index() == 1);
  }
}

TEST_CASE("invert") {
  CHECK(max_abs_diff(invert(Homographyd::identity()), Homographyd::identity()) < 1e-15);
  CHECK(max_abs_diff(invert(Homographyd::translation(2, 3)), Homographyd::translation(-2, -3)) < 1e-15);

  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const Homographyd h(oracle::random_matrix(rng));
    const Homographyd inv = invert(h);
    CHECK(max_abs_diff(invert(inv), h) < 1e-12);
    for (int i = 0; i < 100; ++i) {
      const Point2d p(oracle::uniform(rng, -1, 2), oracle::uniform(rng, -1, 2));
      CHECK((project(inv, project(h, p)) - p).norm() < 1e-9);
    }
  }
}

TEST_CASE("templated on scalar") {
  using Quadl = Quad<long double>;
  const Quadl sq = {Point2<long double>(0, 0), Point2<long double>(1, 0), Point2<long double>(1, 1),
                    Point2<long double>(0, 1)};
  Quadl moved = sq;
  for (auto& p : moved) p += Point2<long double>(0.5L, -0.25L);
  const auto h = dlt_homography(sq, moved);
  CHECK(double(max_abs_diff(h, Homography<long double>::translation(0.5L, -0.25L))) < 1e-15);
}
