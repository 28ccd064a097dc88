#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qwig/examples.hpp"
#include "qwig/geometry.hpp"
#include "qwig/operators.hpp"
#include "support/oracles.hpp"

using namespace qwig;

namespace {

std::vector<RealVector> with_antipodes(const std::vector<RealVector>& dirs) {
  std::vector<RealVector> out;
  for (const auto& u : dirs) {
    out.push_back(u);
    out.push_back(RealVector(-u));
  }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("geometry");

TEST_CASE("direction sets are unit length and deterministic") {
  const auto circle = circle_directions(64);
  REQUIRE(circle.size() == 64);
  for (std::size_t k = 0; k < circle.size(); ++k) {
    CHECK(circle[k].norm() == doctest::Approx(1.0).epsilon(1e-14));
    const double theta = M_PI * static_cast<double>(k) / 64.0;
    CHECK(circle[k](0) == doctest::Approx(std::cos(theta)).epsilon(1e-12));
    CHECK(circle[k](1) == doctest::Approx(std::sin(theta)).epsilon(1e-12));
  }

  const auto sphere = fibonacci_half_sphere(200);
  CHECK(sphere.size() >= 150);
  CHECK(sphere.size() <= 250);
  for (const auto& u : sphere) {
    CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u(2) >= 0.0);
  }
  const auto again = fibonacci_half_sphere(200);
  REQUIRE(again.size() == sphere.size());
  for (std::size_t k = 0; k < sphere.size(); ++k) {
    CHECK((sphere[k] - again[k]).norm() == 0.0);
  }
}

TEST_CASE("the Pauli pair support is the unit circle") {
  const auto ex = make_example("pauli2");
  const auto samples =
      jnr_boundary(ex.tuple, with_antipodes(circle_directions(50)));
  for (const auto& s : samples) {
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(!s.top_degenerate);
    CHECK(s.point.norm() == doctest::Approx(1.0).epsilon(1e-9));
    // The boundary point of a disk in direction u is u itself.
    CHECK((s.point - s.u).norm() <= 1e-9);
  }
}

TEST_CASE("singular samples lie inside the support hull") {
  Rng rng(401);
  const auto heart = make_example("heart");
  const auto triple = make_example("dual-counterexample");
  const auto generic = OperatorTuple::validate(
      {random_hermitian(4, rng), random_hermitian(4, rng)});

  const auto check_in_hull = [](const OperatorTuple& a, int resolution) {
    const std::vector<RealVector> dirs =
        a.n() == 2 ? with_antipodes(circle_directions(150))
                   : with_antipodes(fibonacci_half_sphere(300));
    const auto support = jnr_boundary(a, dirs);
    const auto samples = singular_set(a, resolution);
    CHECK(!samples.empty());
    for (const auto& s : samples) {
      CHECK(inside_support_hull(s.a, support, 1e-8));
    }
  };
  check_in_hull(heart.tuple, 100);
  check_in_hull(triple.tuple, 100);
  check_in_hull(generic, 100);
}

TEST_CASE("nondegenerate boundary points are singular samples") {
  Rng rng(409);
  const auto a = OperatorTuple::validate(
      {random_hermitian(4, rng), random_hermitian(4, rng)});
  const int resolution = 80;
  const auto samples = singular_set(a, resolution);
  const auto boundary = jnr_boundary(a, circle_directions(resolution));

  // singular_set enumerates the same half-circle directions, so top-branch
  // samples pair off with boundary samples of equal direction.
  int matched = 0;
  for (const auto& s : samples) {
    if (s.branch != a.d() - 1) {
      continue;
    }
    for (const auto& b : boundary) {
      if ((b.u - s.u).norm() < 1e-12 && !b.top_degenerate) {
        CHECK((b.point - s.a).norm() <= 1e-9);
        ++matched;
      }
    }
  }
  CHECK(matched == resolution);
}

TEST_CASE("antipodal directions reverse the branch order") {
  Rng rng(419);
  const auto a = OperatorTuple::validate({random_hermitian(3, rng),
                                          random_hermitian(3, rng),
                                          random_hermitian(3, rng)});
  for (int trial = 0; trial < 5; ++trial) {
    RealVector u(3);
    for (int k = 0; k < 3; ++k) {
      u(k) = rng.normal();
    }
    u.normalize();
    const auto plus = pencil(a, u);
    const auto minus = pencil(a, RealVector(-u));
    for (int mu = 0; mu < 3; ++mu) {
      const RealVector ap =
          expectation_tuple(a, plus.eigenvectors.col(mu));
      const RealVector am =
          expectation_tuple(a, minus.eigenvectors.col(2 - mu));
      CHECK((ap - am).norm() <= 1e-9);
      CHECK(plus.eigenvalues(mu) ==
            doctest::Approx(-minus.eigenvalues(2 - mu)).epsilon(1e-10));
    }
  }
}

TEST_CASE("rotating a pair rotates its sampled sets pointwise") {
  Rng rng(421);
  const auto a = OperatorTuple::validate(
      {random_hermitian(4, rng), random_hermitian(4, rng)});
  const double theta = 0.37;
  const double c = std::cos(theta), s = std::sin(theta);
  const auto rotated = OperatorTuple::validate(
      {c * a.op(0) + s * a.op(1), -s * a.op(0) + c * a.op(1)});
  RealMatrix rot(2, 2);
  rot << c, -s, s, c;

  for (const auto& u : circle_directions(40)) {
    // u . rotated = (rot u) . a shares eigenvectors with the unrotated
    // pencil at direction rot u; expectations transform by rot^T.
    const auto dec_rot = pencil(rotated, u);
    const auto dec_orig = pencil(a, RealVector(rot * u));
    for (int mu = 0; mu < 4; ++mu) {
      const RealVector pr =
          expectation_tuple(rotated, dec_rot.eigenvectors.col(mu));
      const RealVector po =
          expectation_tuple(a, dec_orig.eigenvectors.col(mu));
      CHECK((pr - RealVector(rot.transpose() * po)).norm() <= 1e-9);
    }
  }
}

TEST_CASE("algebraic certificates vanish on the sampled curves only") {
  const auto triple = make_example("dual-counterexample");
  const auto samples3 = singular_set(triple.tuple, 100);
  std::vector<RealVector> pts3;
  for (const auto& s : samples3) {
    pts3.push_back(s.a);
  }
  CHECK(polynomial_residual(pts3, SingularPolynomial::kDualCounterexample) <=
        1e-10);

  const auto heart = make_example("heart");
  const auto samples2 = singular_set(heart.tuple, 100);
  std::vector<RealVector> pts2;
  for (const auto& s : samples2) {
    pts2.push_back(s.a);
  }
  CHECK(polynomial_residual(pts2, SingularPolynomial::kHeartQuartic) <=
        1e-10);

  RealVector off3(3);
  off3 << 0.0, 0.5, 0.0;
  CHECK(std::abs(singular_polynomial_value(
            off3, SingularPolynomial::kDualCounterexample)) > 1e-3);
  RealVector off2(2);
  off2 << 0.0, 1.0;
  CHECK(std::abs(singular_polynomial_value(
            off2, SingularPolynomial::kHeartQuartic)) > 1e-3);
}

TEST_CASE("strict convexity probe flags flat boundary pieces") {
  const auto disk = make_example("pauli2");
  const auto round =
      strict_convexity_probe(disk.tuple, circle_directions(100));
  CHECK(round.flagged.empty());
  CHECK(round.min_gap == doctest::Approx(2.0).epsilon(1e-9));

  const auto flat = make_example("commuting-demo");
  const auto segment =
      strict_convexity_probe(flat.tuple, circle_directions(100));
  CHECK(!segment.flagged.empty());
}

TEST_CASE("Pauli eigenvalue curves are the constant pair") {
  const auto ex = make_example("pauli2");
  std::vector<double> ts;
  for (int i = 0; i < 200; ++i) {
    ts.push_back(2.0 * M_PI * i / 200.0);
  }
  const auto curves = eigenvalue_curves(ex.tuple, ts);
  REQUIRE(curves.curves.rows() == 2);
  REQUIRE(static_cast<std::size_t>(curves.curves.cols()) == ts.size());
  CHECK(curves.ambiguous.empty());
  for (int j = 0; j < curves.curves.cols(); ++j) {
    CHECK(curves.curves(0, j) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(curves.curves(1, j) == doctest::Approx(1.0).epsilon(1e-12));
  }

  const auto rec = reconstruct_curve_points(curves, 1);
  CHECK(!rec.points.empty());
  for (const auto& p : rec.points) {
    CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("curve reconstruction recovers generic singular points") {
  Rng rng(431);
  const auto a = OperatorTuple::validate(
      {random_hermitian(3, rng), random_hermitian(3, rng)});
  std::vector<double> ts;
  const int count = 2000;
  for (int i = 0; i < count; ++i) {
    ts.push_back(2.0 * M_PI * i / count);
  }
  const auto curves = eigenvalue_curves(a, ts);
  const auto rec = reconstruct_curve_points(curves, 2);
  REQUIRE(!rec.points.empty());
  // Interior reconstruction against the direct eigenvector expectation:
  // the error is dominated by the O(h^2) central difference in c-dot.
  double max_err = 0.0;
  for (std::size_t i = 0; i < rec.points.size(); ++i) {
    const double t = ts[rec.columns[i]];
    RealVector u(2);
    u << std::cos(t), std::sin(t);
    const auto dec = pencil(a, u);
    const RealVector direct =
        expectation_tuple(a, dec.eigenvectors.col(2));
    max_err = std::max(max_err, (rec.points[i] - direct).norm());
  }
  CHECK(max_err <= 1e-4);
}

TEST_CASE("avoided crossings are flagged, not resolved") {
  const auto ex = make_example("nearly-commuting");
  // The ambiguity criterion is sampling-adaptive: a column is flagged when
  // the smallest adjacent gap is below the inter-sample motion.  The example
  // pair has avoided crossings with gaps around 0.02, which 200 samples on
  // the circle cannot resolve (a much finer sweep legitimately could).
  std::vector<double> ts;
  const int count = 200;
  for (int i = 0; i < count; ++i) {
    ts.push_back(2.0 * M_PI * i / count);
  }
  const auto curves = eigenvalue_curves(ex.tuple, ts);
  CHECK(!curves.ambiguous.empty());
  for (int col : curves.ambiguous) {
    CHECK(col >= 0);
    CHECK(col < count);
  }
  CHECK_THROWS_AS((void)reconstruct_curve_points(curves, 0, false),
                  DegenerateBranch);
  const auto skipped = reconstruct_curve_points(curves, 0, true);
  CHECK(skipped.points.size() < ts.size());
  // Every dropped interior column is accounted for by a flag: a flagged
  // column removes itself and at most its two neighbours, whose central
  // differences would touch the ambiguous data.
  CHECK(skipped.points.size() + 3 * curves.ambiguous.size() >= ts.size() - 2);
}

TEST_CASE("a true 2x2 pair is exactly its compression ellipse") {
  Matrix a1(2, 2), a2(2, 2);
  a1 << 1.0, Complex(0.3, -0.1), Complex(0.3, 0.1), -0.8;
  a2 << 0.2, Complex(-0.15, 0.4), Complex(-0.15, -0.4), 0.9;
  const auto pair = OperatorTuple::validate({a1, a2});
  const auto pred = nearly_commuting_ellipses(pair);
  REQUIRE(pred.ellipses.size() == 1);
  const auto samples = singular_set(pair, 300);
  // The prediction is sampled as a discrete cloud, so the attainable bound
  // is set by the cloud spacing (~ perimeter / samples), not by arithmetic.
  CHECK(hausdorff_to_prediction(samples, pred, 65536) <= 1e-4);
}

TEST_CASE("nearly commuting prediction data is consistent") {
  const auto ex = make_example("nearly-commuting");
  const auto pred = nearly_commuting_ellipses(ex.tuple);
  REQUIRE(pred.diagonal_points.size() == 5);
  REQUIRE(pred.ellipses.size() == 10);  // all coordinate pairs of d = 5
  CHECK(pred.offdiag_max > 0.0);
  CHECK(pred.offdiag_max < 0.5);
  for (const auto& p : pred.diagonal_points) {
    CHECK(distance_to_prediction(p, pred) <= 1e-12);
  }
  const auto samples = singular_set(ex.tuple, 300);
  CHECK(hausdorff_to_prediction(samples, pred) <= 0.15);
}

TEST_CASE("support hull membership is a linear-functional test") {
  const auto ex = make_example("pauli2");
  const auto support =
      jnr_boundary(ex.tuple, with_antipodes(circle_directions(100)));
  CHECK(inside_support_hull(RealVector::Zero(2), support, 0.0));
  RealVector far(2);
  far << 1.3, 0.0;
  CHECK(!inside_support_hull(far, support, 1e-6));
  RealVector boundary(2);
  boundary << 1.0, 0.0;
  CHECK(inside_support_hull(boundary, support, 1e-9));
}

TEST_SUITE_END();
