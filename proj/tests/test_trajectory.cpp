#include <gtest/gtest.h>

#include "hcdr/errors.hpp"
#include "hcdr/trajectory.hpp"
#include "support.hpp"

using namespace hcdr;
using namespace hcdr::test;

TEST(Quintic, BoundaryConditions) {
  const double T = 1.7;
  const auto c = quintic_coefficients(T, 0.3, -0.2, 0.5, 1.1, 0.4, -0.6);
  auto eval = [&](double t, int d) {
    double s = 0.0;
    for (int k = d; k < 6; ++k) {
      double f = 1.0;
      for (int j = 0; j < d; ++j) f *= k - j;
      s += f * c[k] * std::pow(t, k - d);
    }
    return s;
  };
  EXPECT_NEAR(eval(0, 0), 0.3, 1e-12);
  EXPECT_NEAR(eval(0, 1), -0.2, 1e-12);
  EXPECT_NEAR(eval(0, 2), 0.5, 1e-12);
  EXPECT_NEAR(eval(T, 0), 1.1, 1e-12);
  EXPECT_NEAR(eval(T, 1), 0.4, 1e-9);
  EXPECT_NEAR(eval(T, 2), -0.6, 1e-9);
}

TEST(Trajectory, KnotValuesAndSmoothness) {
  const Trajectory tr = case_study_trajectory();
  for (const Waypoint& w : tr.waypoints()) {
    const TrajectorySample s = tr.sample(w.t);
    for (int k = 0; k < 5; ++k) {
      EXPECT_NEAR(s.x[2 * k], w.x[2 * k], 1e-12);
      EXPECT_NEAR(s.x[2 * k + 1], 0.0, 1e-9);
      EXPECT_NEAR(s.acc[k], 0.0, 1e-9);
    }
  }
  // Continuity across interior knots from both sides.
  for (double t : {1.0, 3.0, 5.0}) {
    const TrajectorySample a = tr.sample(t - 1e-9), b = tr.sample(t + 1e-9);
    EXPECT_LE((a.x - b.x).norm(), 1e-7);
    EXPECT_LE((a.acc - b.acc).norm(), 1e-6);
  }
}

TEST(Trajectory, VelocityIsDerivativeOfPosition) {
  const Trajectory tr = case_study_trajectory();
  const double h = 1e-6;
  for (double t : {0.5, 1.7, 2.4, 4.1, 5.6}) {
    const TrajectorySample s = tr.sample(t), sp = tr.sample(t + h), sm = tr.sample(t - h);
    for (int k = 0; k < 5; ++k) {
      EXPECT_NEAR((sp.x[2 * k] - sm.x[2 * k]) / (2 * h), s.x[2 * k + 1], 1e-6);
      EXPECT_NEAR((sp.x[2 * k + 1] - sm.x[2 * k + 1]) / (2 * h), s.acc[k], 1e-5);
    }
  }
}

TEST(CaseStudy, Waypoints) {
  const Trajectory tr = case_study_trajectory();
  EXPECT_DOUBLE_EQ(tr.t_begin(), 0.0);
  EXPECT_DOUBLE_EQ(tr.t_end(), 6.0);
  const TrajectorySample a = tr.sample(1.0);
  EXPECT_DOUBLE_EQ(a.x[0], 0.05);
  EXPECT_DOUBLE_EQ(a.x[2], 0.1);
  EXPECT_NEAR(tr.sample(3.0).x[8], 0.6, 1e-12);
  EXPECT_NEAR(tr.sample(5.0).x[6], 0.8, 1e-12);
  EXPECT_NEAR(tr.sample(5.0).x[8], 0.6, 1e-12);
  EXPECT_NEAR(tr.sample(6.0).x[6], 1.0, 1e-12);
  EXPECT_NEAR(tr.sample(6.0).x[8], 1.0, 1e-12);
}

TEST(CaseStudy, PlatformReferenceIsConstant) {
  const Trajectory tr = case_study_trajectory();
  for (double t = 0.0; t <= 6.0; t += 0.05) {
    const TrajectorySample s = tr.sample(t);
    EXPECT_EQ(s.x[0], 0.05);
    EXPECT_EQ(s.x[2], 0.1);
    for (int i : {1, 3, 4, 5}) EXPECT_EQ(s.x[i], 0.0);
    for (int k : {0, 1, 2}) EXPECT_EQ(s.acc[k], 0.0);
  }
}

TEST(Trajectory, HoldsOutsideRange) {
  const Trajectory tr = case_study_trajectory();
  const TrajectorySample s = tr.sample(8.0);
  EXPECT_EQ(s.x, tr.waypoints().back().x);
  EXPECT_EQ(s.acc.norm(), 0.0);
  EXPECT_EQ(tr.sample(-1.0).x, tr.waypoints().front().x);
}

TEST(Trajectory, EqualWaypointsGiveConstant) {
  const VecX x = Eigen::Vector4d(1.5, 0.0, -2.0, 0.0);
  const Trajectory tr = quintic_trajectory({{0.0, x}, {2.0, x}});
  for (double t : {0.0, 0.3, 1.0, 1.9}) EXPECT_LE((tr.sample(t).x - x).norm(), 1e-15) << t;
}

TEST(Trajectory, RejectsBadWaypoints) {
  const VecX x = VecX::Zero(4);
  EXPECT_THROW(quintic_trajectory({{0.0, x}, {0.0, x}}), ArgumentError);
  EXPECT_THROW(quintic_trajectory({{1.0, x}, {0.5, x}}), ArgumentError);
  EXPECT_THROW(quintic_trajectory({{0.0, x}}), ArgumentError);
  EXPECT_THROW(quintic_trajectory({{0.0, x}, {1.0, VecX::Zero(3)}}), ArgumentError);
}
