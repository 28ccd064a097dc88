#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qwig/charfn.hpp"
#include "qwig/examples.hpp"
#include "qwig/operators.hpp"

using namespace qwig;

namespace {
const Complex kI(0.0, 1.0);

double rotation_defect(const OperatorTuple& pair, const Matrix& u,
                       const RealMatrix& r) {
  double defect = 0.0;
  for (int k = 0; k < 2; ++k) {
    Matrix expect = Matrix::Zero(pair.d(), pair.d());
    for (int l = 0; l < 2; ++l) {
      expect += r(k, l) * pair.op(l);
    }
    const Matrix got = u * pair.op(k) * u.adjoint();
    defect = std::max(defect, (got - expect).cwiseAbs().maxCoeff());
  }
  return defect;
}

RealMatrix planar_rotation(double phi) {
  RealMatrix r(2, 2);
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

RealMatrix planar_reflection() {
  RealMatrix r = RealMatrix::Identity(2, 2);
  r(0, 0) = -1.0;
  return r;
}

}  // namespace

TEST_SUITE_BEGIN("examples");

TEST_CASE("every catalog entry is valid and documented") {
  for (const auto& name : example_names()) {
    const auto ex = make_example(name);
    CHECK(ex.name == name);
    CHECK(!ex.notes.empty());
    CHECK(ex.tuple.n() >= 2);
    CHECK(ex.tuple.n() <= 3);
    CHECK(ex.tuple.d() >= 2);
    CHECK(std::abs(ex.state.matrix().trace().real() - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS((void)make_example("no-such-system"), UnknownExample);
  CHECK(make_example("dihedral-7").tuple.d() == 7);
}

TEST_CASE("Pauli matrices satisfy their algebra") {
  const Matrix x = pauli_x(), y = pauli_y(), z = pauli_z();
  CHECK((x * x - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((y * y - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((x * y - kI * z).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("the Bloch pair state is assembled from the Bloch vector") {
  const auto ex = make_example("pauli2");
  CHECK((ex.state.matrix() - 0.5 * Matrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() <= 1e-15);

  const auto north = make_pauli2(Eigen::Vector3d(0.0, 0.0, 1.0));
  Matrix e00 = Matrix::Zero(2, 2);
  e00(0, 0) = 1.0;
  CHECK((north.state.matrix() - e00).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS((void)make_pauli2(Eigen::Vector3d(0.0, 0.0, 1.5)), Error);
}

TEST_CASE("catalog matrices are pinned") {
  const auto heart = make_example("heart");
  Matrix h1(3, 3), h2(3, 3);
  h1 << 0, 0, 1, 0, 1, 0, 1, 0, 0;
  h2 << 0, 0, 0, 0, 0, 1, 0, 1, 0;
  CHECK((heart.tuple.op(0) - h1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((heart.tuple.op(1) - h2).cwiseAbs().maxCoeff() == 0.0);

  const auto triple = make_example("dual-counterexample");
  Matrix t1(3, 3), t2(3, 3), t3(3, 3);
  t1 << 1, 0, 0, 0, -1, 1, 0, 1, 0;
  t2 << 0, 0, 1, 0, 0, 0, 1, 0, 0;
  t3 << 0, 0, 0, 0, 0, 0, 0, 0, 1;
  CHECK((triple.tuple.op(0) - t1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((triple.tuple.op(1) - t2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((triple.tuple.op(2) - t3).cwiseAbs().maxCoeff() == 0.0);

  const auto demo = make_example("commuting-demo");
  CHECK((demo.tuple.op(0) - demo.tuple.op(1)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(demo.state.matrix()(0, 0).real() == doctest::Approx(0.25));
  CHECK(demo.state.matrix()(1, 1).real() == doctest::Approx(0.75));
}

TEST_CASE("dihedral generators satisfy the group relations") {
  for (int p : {3, 5, 8}) {
    const Matrix u = dihedral_shift(p);
    const Matrix v = dihedral_reflection(p);
    Matrix up = Matrix::Identity(p, p);
    for (int k = 0; k < p; ++k) {
      up = (up * u).eval();
    }
    CHECK((up - Matrix::Identity(p, p)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((v * v - Matrix::Identity(p, p)).cwiseAbs().maxCoeff() <= 1e-14);
    // v u v = u^{-1}
    CHECK((v * u * v - u.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("the multiplet transforms under the planar representation") {
  for (int p : {3, 5, 8}) {
    const auto ex = dihedral_multiplet(p);
    CHECK(ex.tuple.spectral_scale() == doctest::Approx(1.0).epsilon(1e-12));

    const Matrix u = dihedral_shift(p);
    const Matrix v = dihedral_reflection(p);
    const double phi = 2.0 * M_PI / p;

    CHECK(rotation_defect(ex.tuple, u, planar_rotation(phi)) <= 1e-9);
    CHECK(rotation_defect(ex.tuple, v, planar_reflection()) <= 1e-9);
    // A composite element: two steps of rotation then the reflection.  With
    // the convention U A_k U^* = sum_l R_{kl} A_l the map g -> R(g) reverses
    // products, so the composite picks up the factors in opposite order.
    CHECK(rotation_defect(ex.tuple, Matrix(v * u * u),
                          RealMatrix(planar_rotation(2.0 * phi) *
                                     planar_reflection())) <= 1e-9);
  }
}

TEST_CASE("the twirl projects onto the planar isotypic component") {
  for (int p : {3, 5}) {
    CHECK(dihedral_twirl_rank(p) == 2 * p);
    CHECK(dihedral_twirl_idempotence_defect(p) <= 1e-9);

    const auto ex = dihedral_multiplet(p);
    for (int k = 0; k < 2; ++k) {
      const Matrix fixed = dihedral_twirl(ex.tuple.op(k));
      CHECK((fixed - ex.tuple.op(k)).cwiseAbs().maxCoeff() <= 1e-9);
    }
    // The identity carries the trivial representation, not the planar one.
    const Matrix killed = dihedral_twirl(Matrix::Identity(p, p));
    CHECK(killed.cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("different seeds give different multiplets, same symmetry") {
  const auto a = dihedral_multiplet(5, 1);
  const auto b = dihedral_multiplet(5, 2);
  CHECK((a.tuple.op(0) - b.tuple.op(0)).cwiseAbs().maxCoeff() > 1e-3);
  CHECK(rotation_defect(b.tuple, dihedral_shift(5),
                        planar_rotation(2.0 * M_PI / 5.0)) <= 1e-9);
}

TEST_CASE("nearly commuting pairs perturb the five diagonal points") {
  const auto base = make_nearly_commuting(0.0);
  const auto ex = make_nearly_commuting(0.05);
  REQUIRE(ex.tuple.d() == 5);

  const double expected[5][2] = {
      {-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}, {0.0, 2.0}};
  for (int k = 0; k < 2; ++k) {
    // Unperturbed member is exactly diagonal.
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        if (i == j) {
          CHECK(base.tuple.op(k)(i, i).real() ==
                doctest::Approx(expected[i][k]));
          // Couplings have zero diagonal, so diagonals are unperturbed.
          CHECK(ex.tuple.op(k)(i, i) == base.tuple.op(k)(i, i));
        } else {
          CHECK(std::abs(base.tuple.op(k)(i, j)) == 0.0);
        }
      }
    }
    const Matrix coupling = ex.tuple.op(k) - base.tuple.op(k);
    CHECK(coupling.cwiseAbs().maxCoeff() > 0.0);
    CHECK(coupling.cwiseAbs().maxCoeff() < 0.5);
  }
  // Halving the scale halves the same coupling exactly.
  const auto half = make_nearly_commuting(0.025);
  const Matrix c1 = ex.tuple.op(0) - base.tuple.op(0);
  const Matrix c2 = half.tuple.op(0) - base.tuple.op(0);
  CHECK((c1 - 2.0 * c2).cwiseAbs().maxCoeff() <= 1e-14);
}

// The radial reference is supported on s >= 0.  Folding the lower Gaussian
// tail across the origin cancels exactly in even moments but leaves an
// O(eps^{3/2} e^{-1/(4 eps)}) excess in odd ones, so those identities carry an
// explicit exponentially small allowance.
double odd_tail(double eps) {
  return std::pow(eps, 1.5) * std::exp(-1.0 / (4.0 * eps));
}

TEST_CASE("the triple radial reference has the advertised moments") {
  for (double eps : {0.01, 0.05}) {
    CHECK(qubit3_moment(2, eps) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::abs(qubit3_moment(3, eps) - 4.0) <=
          4e-9 + 20.0 * odd_tail(eps));
    CHECK(qubit3_moment(4, eps) ==
          doctest::Approx(6.0 + 12.0 * eps).epsilon(1e-9));
  }
  // The odd-moment excess is a genuine positive tail, not quadrature noise.
  CHECK(qubit3_moment(3, 0.05) > 4.0 + 1e-5);
}

TEST_CASE("the radial variance paradox and its extrapolation") {
  for (double eps : {0.02, 0.005}) {
    CHECK(std::abs(qubit3_paradox_variance(eps) - (-1.0 + 6.0 * eps)) <=
          1e-8 + 50.0 * odd_tail(eps));
    CHECK(std::abs(qubit3_paradox_extrapolated(eps) - (-1.0)) <=
          1e-8 + 100.0 * odd_tail(eps));
  }
  CHECK(qubit3_paradox_variance(0.01) < 0.0);
}

TEST_CASE("the radial reference is continuous through the origin") {
  for (double eps : {0.01, 0.1}) {
    const double near = qubit3_radial(1e-7, eps);
    const double small = qubit3_radial(1e-4, eps);
    CHECK(std::abs(near - small) <= 1e-4 * std::abs(near) + 1e-12);
  }
}

TEST_CASE("the pair reference integrates to one and has the right limit") {
  for (double eps : {0.01, 0.1}) {
    CHECK(qubit2_normalization(eps) == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK(qubit2_reference(0.5, 1e-7) ==
        doctest::Approx(qubit2_regular_part(0.5)).epsilon(1e-4));
  CHECK_THROWS_AS((void)qubit2_regular_part(1.0), Error);
  CHECK_THROWS_AS((void)qubit2_regular_part(-0.1), Error);
}

TEST_CASE("the state factor is affine in the Bloch vector") {
  RealVector a(2), b0(2), b1(2);
  a << 0.3, -0.4;
  b0 << 0.0, 0.0;
  b1 << 0.6, 0.8;
  CHECK(qubit_wigner_state_factor(a, b0) == doctest::Approx(0.5));
  CHECK(qubit_wigner_state_factor(a, b1) ==
        doctest::Approx(0.5 * (1.0 + 0.3 * 0.6 - 0.4 * 0.8)));
}

TEST_CASE("the Pauli-triple characteristic function is cos |xi|") {
  const auto ex = make_example("pauli3");
  Rng rng(511);
  for (int trial = 0; trial < 20; ++trial) {
    RealVector xi(3);
    for (int k = 0; k < 3; ++k) {
      xi(k) = 1.5 * rng.normal();
    }
    CHECK(std::abs(char_function(ex.tuple, ex.state, xi) -
                   Complex(std::cos(xi.norm()), 0.0)) <= 1e-13);
  }
}

TEST_SUITE_END();
