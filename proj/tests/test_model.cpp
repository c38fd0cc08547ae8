#include <doctest.h>

#include <random>

#include "boltzmix/collision_geometry.hpp"
#include "boltzmix/kernel.hpp"
#include "boltzmix/species.hpp"

using namespace bmx;

TEST_CASE("maxwellian closed forms") {
  CHECK(maxwellian({2.0 * M_PI, 1.0}, {0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-14));
  // (2 pi)^(-3/2)
  CHECK(maxwellian({1.0, 1.0}, {0, 0, 0}) ==
        doctest::Approx(0.06349363593424097).epsilon(1e-14));
  // strictly positive and even
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-6.0, 6.0);
  for (int d = 0; d < 200; ++d) {
    const Vec3 v{coord(rng), coord(rng), coord(rng)};
    const double a = maxwellian({1.7, 0.3}, v);
    CHECK(a > 0.0);
    CHECK(a == doctest::Approx(maxwellian({1.7, 0.3}, -v)).epsilon(1e-15));
  }
}

TEST_CASE("velocity weight") {
  CHECK(velocity_weight({5.0}, {0, 0, 0}) == 1.0);
  CHECK(velocity_weight({4.5}, {1.0, 1.0, 1.0}) ==
        doctest::Approx(22.627416997969522).epsilon(1e-14));
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  for (int d = 0; d < 500; ++d) {
    Vec3 a{coord(rng), coord(rng), coord(rng)};
    Vec3 b{coord(rng), coord(rng), coord(rng)};
    if (norm(a) > norm(b)) std::swap(a, b);
    CHECK(velocity_weight({5.0}, a) <= velocity_weight({5.0}, b) * (1 + 1e-14));
    CHECK(velocity_weight({5.0}, a) >= 1.0);
  }
}

TEST_CASE("post-collision sigma map") {
  // sigma along the relative velocity reproduces the incoming pair
  const Vec3 v{0.4, -1.2, 0.7}, vs{-0.3, 0.5, 2.0};
  const Vec3 u = (v - vs) / norm(v - vs);
  const PostCollision id = post_collision_sigma(1.3, 2.7, v, vs, u);
  CHECK(norm(id.v_prime - v) < 1e-13);
  CHECK(norm(id.v_star_prime - vs) < 1e-13);

  const PostCollision head_on =
      post_collision_sigma(1.0, 1.0, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0});
  CHECK(norm(head_on.v_prime - Vec3{0, 1, 0}) < 1e-15);
  CHECK(norm(head_on.v_star_prime - Vec3{0, -1, 0}) < 1e-15);

  CHECK_THROWS_AS(post_collision_sigma(1, 1, v, vs, {0.5, 0, 0}), std::invalid_argument);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::uniform_real_distribution<double> mass(0.2, 5.0);
  double worst_p = 0.0, worst_e = 0.0;
  for (int d = 0; d < 10000; ++d) {
    const double mi = mass(rng), mj = mass(rng);
    const Vec3 a{coord(rng), coord(rng), coord(rng)}, b{coord(rng), coord(rng), coord(rng)};
    Vec3 dir{coord(rng), coord(rng), coord(rng)};
    if (norm(dir) < 1e-9) dir = {1, 0, 0};
    const PostCollision pc = post_collision_sigma(mi, mj, a, b, dir / norm(dir));
    const double scale = std::max(1.0, (mi + mj) * (norm(a) + norm(b)));
    worst_p = std::max(worst_p,
                       norm(mi * a + mj * b - mi * pc.v_prime - mj * pc.v_star_prime) / scale);
    const double e0 = mi * norm2(a) + mj * norm2(b);
    worst_e = std::max(
        worst_e, std::fabs(mi * norm2(pc.v_prime) + mj * norm2(pc.v_star_prime) - e0) /
                     std::max(1.0, e0));
  }
  CHECK(worst_p <= 1e-12);
  CHECK(worst_e <= 1e-12);
}

TEST_CASE("post-collision omega map") {
  // omega orthogonal to the relative velocity changes nothing
  const Vec3 v{1.0, 0.2, -0.5}, vs{-0.7, 1.1, 0.4};
  Vec3 e1, e2;
  orthonormal_frame((vs - v) / norm(vs - v), e1, e2);
  const PostCollision fixed = post_collision_omega(0.7, 2.2, v, vs, e1);
  CHECK(norm(fixed.v_prime - v) < 1e-13);
  CHECK(norm(fixed.v_star_prime - vs) < 1e-13);

  const PostCollision pc =
      post_collision_omega(1.0, 3.0, {0, 0, 0}, {1, 0, 0}, {1, 0, 0});
  CHECK(norm(pc.v_prime - Vec3{1.5, 0, 0}) < 1e-15);
  CHECK(norm(pc.v_star_prime - Vec3{0.5, 0, 0}) < 1e-15);

  CHECK_THROWS_AS(post_collision_omega(1, 1, v, vs, {0.0, 0.3, 0.0}), std::invalid_argument);

  // sigma = u_hat - 2 (u_hat . omega) omega makes the two maps agree
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::uniform_real_distribution<double> mass(0.2, 5.0);
  double worst = 0.0;
  for (int d = 0; d < 5000; ++d) {
    const double mi = mass(rng), mj = mass(rng);
    const Vec3 a{coord(rng), coord(rng), coord(rng)}, b{coord(rng), coord(rng), coord(rng)};
    if (norm(a - b) < 1e-6) continue;
    Vec3 dir{coord(rng), coord(rng), coord(rng)};
    if (norm(dir) < 1e-9) dir = {0, 0, 1};
    const Vec3 omega = dir / norm(dir);
    const PostCollision po = post_collision_omega(mi, mj, a, b, omega);
    const Vec3 sig = sigma_from_omega(a, b, omega);
    const PostCollision ps = post_collision_sigma(mi, mj, a, b, sig / norm(sig));
    worst = std::max(worst, norm(po.v_prime - ps.v_prime) + norm(po.v_star_prime - ps.v_star_prime));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("carleman sphere") {
  const CarlemanSphere degenerate_at_point = carleman_sphere({0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}, 3.0, 1.0);
  CHECK(degenerate_at_point.radius == 0.0);
  CHECK(norm(degenerate_at_point.center - Vec3{0.5, 0.5, 0.5}) < 1e-15);
  CHECK_FALSE(degenerate_at_point.degenerate);

  const CarlemanSphere s = carleman_sphere({0, 0, 0}, {1, 0, 0}, 2.0, 1.0);
  CHECK(s.radius == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(norm(s.center - Vec3{-1, 0, 0}) < 1e-15);

  CHECK(carleman_sphere({1, 2, 3}, {0, 0, 0}, 1.0, 1.0).degenerate);
  CHECK(carleman_sphere({1, 2, 3}, {0, 0, 0}, 1.0, 1.0 + 1e-12).degenerate);
  CHECK_FALSE(carleman_sphere({1, 2, 3}, {0, 0, 0}, 1.0, 1.1).degenerate);
}

TEST_CASE("exponent cancellation identity") {
  // v = v'_* : both sides reduce to -m_j |v|^2 / 4
  const Vec3 v{1.2, -0.4, 2.0};
  const ExponentCancellation same = exponent_cancellation(v, v, 1.0, 2.5);
  CHECK(same.lhs == doctest::Approx(-2.5 * norm2(v) / 4.0).epsilon(1e-13));
  CHECK(same.rhs == doctest::Approx(same.lhs).epsilon(1e-13));

  // v = 0 : rhs reduces to -m_j |v'_*|^2 / 4
  const Vec3 vsp{0.3, 1.0, -2.0};
  const ExponentCancellation zero = exponent_cancellation({0, 0, 0}, vsp, 1.7, 0.6);
  CHECK(zero.rhs == doctest::Approx(-0.6 * norm2(vsp) / 4.0).epsilon(1e-13));
  CHECK(zero.lhs == doctest::Approx(zero.rhs).epsilon(1e-13));

  CHECK_THROWS_AS(exponent_cancellation(v, vsp, 1.0, 1.0), std::invalid_argument);

  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> mass(0.2, 5.0);
  double worst = 0.0, worst_rhs = -1e300;
  for (int d = 0; d < 100000; ++d) {
    const Vec3 a{coord(rng), coord(rng), coord(rng)}, b{coord(rng), coord(rng), coord(rng)};
    double mi = mass(rng), mj = mass(rng);
    while (std::fabs(mi - mj) < 0.1) mj = mass(rng);
    const ExponentCancellation ec = exponent_cancellation(a, b, mi, mj);
    worst = std::max(worst, std::fabs(ec.lhs - ec.rhs) / std::max(1.0, std::fabs(ec.lhs)));
    worst_rhs = std::max(worst_rhs, ec.rhs);
  }
  CHECK(worst <= 1e-12);
  CHECK(worst_rhs <= 0.0);
}

TEST_CASE("kernel spec invariants") {
  KernelSpec k(2, 0.5, 2.0, 1.5, AngularProfile{AngularKind::AbsCos, 1.0});
  CHECK(k.evaluate(0, 1, 2.0, -0.5) == doctest::Approx(2.0 * std::sqrt(2.0) * 0.5));
  CHECK(k.evaluate(0, 1, 3.0, 0.25) == k.evaluate(1, 0, 3.0, 0.25));
  // gamma = 0 includes the coincidence point with factor 1
  KernelSpec k0(2, 0.0, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
  CHECK(k0.relative_speed_factor(0.0) == 1.0);
  KernelSpec k1(2, 1.0, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
  CHECK(k1.relative_speed_factor(0.0) == 0.0);

  CHECK_THROWS_AS(KernelSpec(2, -0.1, 1.0, 1.0, AngularProfile{}), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec(2, 1.5, 1.0, 1.0, AngularProfile{}), std::invalid_argument);
  // angular cap: coeff must stay below c_b
  CHECK_THROWS_AS(KernelSpec(2, 0.5, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 2.0}),
                  std::invalid_argument);
  // cos^2 profile obeys 0 <= b(t) <= c_b |t|
  KernelSpec kq(2, 0.0, 1.0, 1.0, AngularProfile{AngularKind::CosSq, 1.0});
  for (double t = -1.0; t <= 1.0; t += 0.01) {
    const double b = kq.angular(0, 1)(t);
    CHECK(b >= 0.0);
    CHECK(b <= 1.0 * std::fabs(t) + 1e-15);
  }

  CHECK_THROWS_AS(Mixture({{-1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Mixture({{1.0, 0.0}}), std::invalid_argument);
}
