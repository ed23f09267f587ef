#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "pushrec/dynamics.hpp"
#include "pushrec/errors.hpp"

using namespace pushrec;

TEST_CASE("ip dynamics") {
  const RobotParams p;

  SUBCASE("upright equilibrium") {
    const auto d = ip_dynamics(ModelState::cartesian(ModelKind::IP, 0.0, 0.0), 0.0, p);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.0);
  }

  SUBCASE("hand-evaluated lean") {
    const double theta = 0.1;
    const double x = p.l_0 * std::sin(theta);
    const auto d = ip_dynamics(ModelState::cartesian(ModelKind::IP, x, 0.0), 0.0, p);
    // with theta_dot = 0, x_dd = l_0 cos(theta) * theta_dd
    const double theta_dd = d[1] / (p.l_0 * std::cos(theta));
    CHECK(theta_dd == doctest::Approx((p.g / p.l_0) * std::sin(theta)).epsilon(1e-12));
    CHECK(theta_dd == doctest::Approx(1.9588).epsilon(1e-4));
  }

  SUBCASE("matches the linear model for small angles") {
    RobotParams tall = p;
    tall.z_c = tall.l_0;  // linearization height = pendulum length
    tall.z_c_max = tall.l_0;
    const double theta = 0.01;
    const double x = tall.l_0 * std::sin(theta);
    const auto dip = ip_dynamics(ModelState::cartesian(ModelKind::IP, x, 0.0), 0.0, tall);
    const auto dlin =
        lipm_dynamics(ModelState::cartesian(ModelKind::LIPM, x, 0.0), 0.0, tall);
    CHECK(std::abs(dip[1] - dlin[1]) / std::abs(dlin[1]) < 1e-4);

    for (double th = -0.05; th <= 0.05; th += 0.01) {
      if (th == 0.0) continue;
      const double xs = tall.l_0 * std::sin(th);
      const auto a = ip_dynamics(ModelState::cartesian(ModelKind::IP, xs, 0.0), 0.0, tall);
      const auto b =
          lipm_dynamics(ModelState::cartesian(ModelKind::LIPM, xs, 0.0), 0.0, tall);
      CHECK(std::abs(a[1] - b[1]) <= 5.0 * tall.g * std::abs(th * th * th));
    }
  }

  SUBCASE("rejects bad input") {
    CHECK_THROWS_AS(
        ip_dynamics(ModelState::cartesian(ModelKind::IP,
                                          std::numeric_limits<double>::quiet_NaN(), 0.0),
                    0.0, p),
        RejectedInput);
    CHECK_THROWS_AS(ip_dynamics(ModelState::cartesian(ModelKind::IP, 0.6, 0.0), 0.0, p),
                    RejectedInput);
    CHECK_THROWS_AS(ip_dynamics(ModelState::cartesian(ModelKind::LIPM, 0.0, 0.0), 0.0, p),
                    RejectedInput);
  }
}

TEST_CASE("lipm dynamics") {
  const RobotParams p;

  SUBCASE("equilibrium and restoring term") {
    const auto d0 = lipm_dynamics(ModelState::cartesian(ModelKind::LIPM, 0.0, 0.0), 0.0, p);
    CHECK(d0[1] == 0.0);

    const auto d = lipm_dynamics(ModelState::cartesian(ModelKind::LIPM, 0.1, 0.0), 0.0, p);
    CHECK(d[1] == doctest::Approx((9.81 / 0.45) * 0.1).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(2.18).epsilon(1e-3));
  }

  SUBCASE("zmp at the mass kills the restoring term") {
    const auto d = lipm_dynamics(ModelState::cartesian(ModelKind::LIPM, 0.1, 0.2), 0.1, p);
    CHECK(d[0] == 0.2);
    CHECK(d[1] == 0.0);
  }

  SUBCASE("invalid height") {
    RobotParams bad = p;
    bad.z_c = -1.0;
    CHECK_THROWS_AS(
        lipm_dynamics(ModelState::cartesian(ModelKind::LIPM, 0.0, 0.0), 0.0, bad),
        InvalidParameter);
  }
}

TEST_CASE("tmipm dynamics") {
  const RobotParams p;

  SUBCASE("zero swing mass reduces to the linear model") {
    RobotParams noswing = p;
    noswing.m_1 = noswing.m_2 = noswing.m_3 = 0.0;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int i = 0; i < 50; ++i) {
      const double x = u(rng), xd = u(rng), px = 0.2 * u(rng);
      const SwingSample sw{u(rng), std::abs(u(rng)), u(rng), u(rng)};
      const auto a = tmipm_dynamics(ModelState::cartesian(ModelKind::TMIPM, x, xd), px,
                                    sw, noswing);
      const auto b =
          lipm_dynamics(ModelState::cartesian(ModelKind::LIPM, x, xd), px, noswing);
      CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-15));
    }
  }

  SUBCASE("hand-evaluated coupling") {
    const SwingSample sw{0.1, 0.05, 0.0, 0.0};
    const auto d =
        tmipm_dynamics(ModelState::cartesian(ModelKind::TMIPM, 0.0, 0.0), 0.0, sw, p);
    CHECK(d[1] == doctest::Approx((3.5 / (7.0 * 0.45)) * (0.1 * 9.81)).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(1.09).epsilon(1e-6));
  }

  SUBCASE("static swing mass above the zmp leaves the linear model") {
    const SwingSample sw{0.03, 0.2, 0.0, 0.0};
    const auto a =
        tmipm_dynamics(ModelState::cartesian(ModelKind::TMIPM, 0.1, 0.0), 0.03, sw, p);
    const auto b = lipm_dynamics(ModelState::cartesian(ModelKind::LIPM, 0.1, 0.0), 0.03, p);
    CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-15));
  }

  SUBCASE("invalid body mass") {
    RobotParams bad = p;
    bad.m_c = 0.0;
    CHECK_THROWS_AS(tmipm_dynamics(ModelState::cartesian(ModelKind::TMIPM, 0.0, 0.0),
                                   0.0, SwingSample{}, bad),
                    InvalidParameter);
  }
}

TEST_CASE("mmipm dynamics") {
  const RobotParams p;

  SUBCASE("zero part masses reduce to the linear model") {
    const std::array<BodyPoint, 3> parts = {BodyPoint{0.0, 0.1, 0.3, 0.0, 0.0},
                                            BodyPoint{0.0, 0.1, 0.15, 0.0, 0.0},
                                            BodyPoint{0.0, 0.1, 0.05, 0.0, 0.0}};
    const auto a =
        mmipm_dynamics(ModelState::cartesian(ModelKind::MMIPM, 0.07, -0.1), 0.02, parts, p);
    const auto b =
        lipm_dynamics(ModelState::cartesian(ModelKind::LIPM, 0.07, -0.1), 0.02, p);
    CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-15));
  }

  SUBCASE("single part equals the lumped two-mass model") {
    const std::array<BodyPoint, 3> parts = {BodyPoint{3.5, 0.12, 0.08, 0.3, -0.2},
                                            BodyPoint{0.0, 0.0, 0.0, 0.0, 0.0},
                                            BodyPoint{0.0, 0.0, 0.0, 0.0, 0.0}};
    const SwingSample lumped{0.12, 0.08, 0.3, -0.2};
    const auto a =
        mmipm_dynamics(ModelState::cartesian(ModelKind::MMIPM, 0.05, 0.1), 0.01, parts, p);
    const auto b =
        tmipm_dynamics(ModelState::cartesian(ModelKind::TMIPM, 0.05, 0.1), 0.01, lumped, p);
    CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-14));
  }

  SUBCASE("hand-evaluated three static parts") {
    const std::array<BodyPoint, 3> parts = {BodyPoint{1.5, 0.1, 0.30, 0.0, 0.0},
                                            BodyPoint{1.5, 0.1, 0.15, 0.0, 0.0},
                                            BodyPoint{0.5, 0.1, 0.05, 0.0, 0.0}};
    const auto d =
        mmipm_dynamics(ModelState::cartesian(ModelKind::MMIPM, 0.0, 0.0), 0.0, parts, p);
    CHECK(d[1] ==
          doctest::Approx((1.0 / (7.0 * 0.45)) * 9.81 * 0.1 * 3.5).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(1.09).epsilon(1e-6));
  }

  SUBCASE("wrong part count") {
    const std::vector<BodyPoint> two(2);
    CHECK_THROWS_AS(
        mmipm_dynamics(ModelState::cartesian(ModelKind::MMIPM, 0.0, 0.0), 0.0, two, p),
        RejectedInput);
  }
}

TEST_CASE("lippfm dynamics") {
  const RobotParams p;

  SUBCASE("zero flywheel torque reduces to the linear model") {
    const auto a = lippfm_dynamics(ModelState::lippfm(0.08, -0.3, 0.2, 0.5), 0.02, 0.0, p);
    const auto b = lipm_dynamics(ModelState::cartesian(ModelKind::LIPM, 0.08, -0.3), 0.02, p);
    CHECK(a[0] == b[0]);
    CHECK(a[1] == b[1]);
    CHECK(a[2] == 0.5);
    CHECK(a[3] == 0.0);
  }

  SUBCASE("hand-evaluated torque response") {
    const auto d = lippfm_dynamics(ModelState::lippfm(0.0, 0.0, 0.0, 0.0), 0.0, 5.0, p);
    CHECK(d[1] == doctest::Approx(-5.0 / (10.5 * 0.5)).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(-0.952).epsilon(1e-3));
    CHECK(d[3] == doctest::Approx(50.0).epsilon(1e-12));
  }

  SUBCASE("torque sign flip mirrors the forced terms") {
    const ModelState s = ModelState::lippfm(0.1, 0.2, 0.0, 0.0);
    const auto plus = lippfm_dynamics(s, 0.03, 2.0, p);
    const auto minus = lippfm_dynamics(s, 0.03, -2.0, p);
    const auto base = lippfm_dynamics(s, 0.03, 0.0, p);
    CHECK(plus[1] - base[1] == doctest::Approx(-(minus[1] - base[1])).epsilon(1e-15));
    CHECK(plus[3] == doctest::Approx(-minus[3]).epsilon(1e-15));
  }

  SUBCASE("torque bound enforced") {
    CHECK_THROWS_AS(
        lippfm_dynamics(ModelState::lippfm(0.0, 0.0, 0.0, 0.0), 0.0, 5.1, p),
        BoundViolation);
  }
}

TEST_CASE("elippfm dynamics") {
  const RobotParams p;

  SUBCASE("upright equilibrium") {
    const auto d = elippfm_dynamics(ModelState::elippfm(0, 0, 0, 0), 0, 0, 0, p);
    for (int i = 0; i < 4; ++i) CHECK(d[i] == 0.0);
  }

  SUBCASE("input matrix read") {
    const auto d = elippfm_dynamics(ModelState::elippfm(0, 0, 0, 0), 1.0, 0.0, 0.0, p);
    const double gamma = p.gamma_fly();
    CHECK(d[1] == doctest::Approx(1.0 / gamma).epsilon(1e-14));
    CHECK(d[3] == doctest::Approx(-1.0 / gamma).epsilon(1e-14));
  }

  SUBCASE("hand-evaluated gravity term") {
    const auto d = elippfm_dynamics(ModelState::elippfm(0.05, 0, 0, 0), 0, 0, 0, p);
    const double gamma = 7.0 * 0.25 + 3.5 * 0.25 / 3.0;
    const double mu = 3.5 * 0.25 + 7.0 * 0.5;
    CHECK(gamma == doctest::Approx(p.gamma_fly()).epsilon(1e-15));
    CHECK(mu == doctest::Approx(p.mu_fly()).epsilon(1e-15));
    CHECK(d[1] == doctest::Approx(mu * 9.81 * 0.05 / gamma).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(1.051071).epsilon(1e-5));
  }

  SUBCASE("pendulum and flywheel accelerations cancel except the wheel torque") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      const ModelState s =
          ModelState::elippfm(0.3 * u(rng), u(rng), 0.4 * u(rng), u(rng));
      const double tau_a = p.tau_a_max * u(rng);
      const double tau_w = p.tau_w_max * u(rng);
      const double zc_dd = p.zcdd_max * u(rng);
      const auto d = elippfm_dynamics(s, tau_a, tau_w, zc_dd, p);
      CHECK(d[1] + d[3] == doctest::Approx(tau_w / p.i_w).epsilon(1e-12));
    }
  }

  SUBCASE("bound violations") {
    const ModelState s = ModelState::elippfm(0, 0, 0, 0);
    CHECK_THROWS_AS(elippfm_dynamics(s, p.tau_a_max + 0.1, 0, 0, p), BoundViolation);
    CHECK_THROWS_AS(elippfm_dynamics(s, 0, p.tau_w_max + 0.1, 0, p), BoundViolation);
    CHECK_THROWS_AS(elippfm_dynamics(s, 0, 0, p.zcdd_max + 0.01, p), BoundViolation);
  }
}

TEST_CASE("zmp formula") {
  const RobotParams p;

  SUBCASE("single static body") {
    const std::array<BodyPoint, 1> b = {BodyPoint{7.0, 0.3, 0.45, 0.0, 0.0}};
    CHECK(compute_zmp(b, p) == doctest::Approx(0.3).epsilon(1e-15));
  }

  SUBCASE("round trip with the linear pendulum") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int i = 0; i < 50; ++i) {
      const double x = u(rng), pstar = u(rng);
      const double xdd = (p.g / p.z_c) * (x - pstar);
      const std::array<BodyPoint, 1> b = {BodyPoint{7.0, x, p.z_c, xdd, 0.0}};
      CHECK(compute_zmp(b, p) == doctest::Approx(pstar).epsilon(1e-12));
    }
  }

  SUBCASE("symmetric static masses") {
    const std::array<BodyPoint, 2> b = {BodyPoint{2.0, -0.4, 0.3, 0.0, 0.0},
                                        BodyPoint{2.0, 0.4, 0.3, 0.0, 0.0}};
    CHECK(compute_zmp(b, p) == doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("free fall has no zmp") {
    const std::array<BodyPoint, 1> b = {BodyPoint{7.0, 0.1, 0.45, 0.0, -9.81}};
    CHECK_THROWS_AS(compute_zmp(b, p), DegenerateLoad);
    CHECK_THROWS_AS(compute_zmp(std::span<const BodyPoint>{}, p), RejectedInput);
  }
}

TEST_CASE("capture point and orbital energy") {
  const RobotParams p;
  const double om = p.omega();

  SUBCASE("capture point values") {
    CHECK(capture_point(0.0, 0.0, om) == 0.0);
    CHECK(capture_point(0.0, 0.2, om) == doctest::Approx(0.2 / om).epsilon(1e-15));
    CHECK(capture_point(0.0, 0.2, om) == doctest::Approx(0.04283).epsilon(1e-4));
    CHECK(capture_point(0.1, -0.1 * om, om) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(capture_point(0.0, 0.0, 0.0), InvalidParameter);
  }

  SUBCASE("orbital energy values") {
    CHECK(orbital_energy(0.0, 0.0, 0.0, om) == 0.0);
    // capture trajectory: divergent and convergent parts cancel
    CHECK(orbital_energy(0.1, -0.1 * om, 0.0, om) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(orbital_energy(0.1, 0.0, 0.0, om) ==
          doctest::Approx(-0.5 * om * om * 0.01).epsilon(1e-15));
    CHECK(orbital_energy(0.1, 0.0, 0.0, om) == doctest::Approx(-0.1090).epsilon(1e-3));
  }

  SUBCASE("conserved along the analytic flow") {
    const double x0 = 0.07, v0 = -0.12, px = 0.02;
    const double e0 = orbital_energy(x0, v0, px, om);
    for (double t = 0.1; t <= 1.0; t += 0.1) {
      const double r = x0 - px;
      const double x = px + r * std::cosh(om * t) + (v0 / om) * std::sinh(om * t);
      const double v = om * r * std::sinh(om * t) + v0 * std::cosh(om * t);
      CHECK(orbital_energy(x, v, px, om) == doctest::Approx(e0).epsilon(1e-9));
    }
  }
}

TEST_CASE("affine superposition of the linear models") {
  const RobotParams p;
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-0.4, 0.4);

  auto mixed_second_difference = [](auto&& f) {
    // f is affine iff f(s+a+b) - f(s+a) - f(s+b) + f(s) = 0
    const double fa = f(1.0, 0.0), fb = f(0.0, 1.0), fab = f(1.0, 1.0), f0 = f(0.0, 0.0);
    return std::abs(fab - fa - fb + f0);
  };

  for (int i = 0; i < 20; ++i) {
    const double x = u(rng), xd = u(rng), px = 0.1 * u(rng), dpx = 0.1 * u(rng);
    const double dx = u(rng);

    CHECK(mixed_second_difference([&](double a, double b) {
            return lipm_dynamics(
                ModelState::cartesian(ModelKind::LIPM, x + a * dx, xd), px + b * dpx,
                p)[1];
          }) < 1e-12);

    const SwingSample sw{u(rng), std::abs(u(rng)), u(rng), u(rng)};
    CHECK(mixed_second_difference([&](double a, double b) {
            return tmipm_dynamics(
                ModelState::cartesian(ModelKind::TMIPM, x + a * dx, xd), px + b * dpx,
                sw, p)[1];
          }) < 1e-12);

    CHECK(mixed_second_difference([&](double a, double b) {
            return lippfm_dynamics(ModelState::lippfm(x + a * dx, xd, 0.0, 0.0), px,
                                   b * 2.0, p)[1];
          }) < 1e-12);

    CHECK(mixed_second_difference([&](double a, double b) {
            return elippfm_dynamics(ModelState::elippfm(0.2 * (x + a * dx), xd, 0, 0),
                                    b * 1.0, 0.5, 0.0, p)[1];
          }) < 1e-12);
  }
}

TEST_CASE("held mid-stance pose") {
  const RobotParams p;
  const MidstancePose pose = MidstancePose::from(p);

  SUBCASE("heights from the bent-knee geometry") {
    const double cos_a = (0.28 * 0.28 + 0.45 * 0.45 - 0.28 * 0.28) / (2 * 0.28 * 0.45);
    CHECK(pose.z_thigh == doctest::Approx(0.45 - 0.5 * 0.28 * cos_a).epsilon(1e-12));
    CHECK(pose.z_shin == doctest::Approx(0.5 * (0.45 - 0.28 * cos_a)).epsilon(1e-12));
    CHECK(pose.z_foot == 0.0);
  }

  SUBCASE("swing sample is self-consistent with the dynamics") {
    for (double x : {-0.15, -0.02, 0.0, 0.1}) {
      for (double px : {-0.05, 0.0, 0.05}) {
        const ModelState s = ModelState::cartesian(ModelKind::TMIPM, x, 0.3);
        const SwingSample sw = pose.swing_sample(s, px, p);
        const auto d = tmipm_dynamics(s, px, sw, p);
        CHECK(d[1] == doctest::Approx(sw.x_s_dd).epsilon(1e-12));

        const ModelState sm = ModelState::cartesian(ModelKind::MMIPM, x, 0.3);
        const auto parts = pose.swing_parts(sm, px, p);
        const auto dm = mmipm_dynamics(sm, px, parts, p);
        CHECK(dm[1] == doctest::Approx(d[1]).epsilon(1e-12));
      }
    }
  }

  SUBCASE("model frequencies") {
    CHECK(model_frequency(ModelKind::LIPM, p) == doctest::Approx(std::sqrt(9.81 / 0.45)));
    CHECK(model_frequency(ModelKind::LIPPFM, p) == model_frequency(ModelKind::LIPM, p));
    CHECK(model_frequency(ModelKind::IP, p) == doctest::Approx(std::sqrt(9.81 / 0.5)));
    const double num = 9.81 / 0.45 + 3.5 * 9.81 / (7.0 * 0.45);
    const double den = 1.0 + pose.mass_height_sum / (7.0 * 0.45);
    CHECK(model_frequency(ModelKind::TMIPM, p) ==
          doctest::Approx(std::sqrt(num / den)).epsilon(1e-12));
    CHECK(model_frequency(ModelKind::MMIPM, p) == model_frequency(ModelKind::TMIPM, p));
    CHECK(model_frequency(ModelKind::ELIPPFM, p) ==
          doctest::Approx(std::sqrt(p.mu_fly() * p.g / p.gamma_fly())).epsilon(1e-12));
  }
}

TEST_CASE("robot parameter validation") {
  RobotParams p;
  CHECK_NOTHROW(p.validate());
  p.m_c = -1.0;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = RobotParams{};
  p.z_c = 0.55;  // above z_c_max
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
}
