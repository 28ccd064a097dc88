#include "qwig/examples.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

namespace qwig {

namespace {

constexpr double kPi = std::numbers::pi;

using Quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;

Matrix heart_a1() {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 2) = 1.0;
  m(1, 1) = 1.0;
  m(2, 0) = 1.0;
  return m;
}

Matrix heart_a2() {
  Matrix m = Matrix::Zero(3, 3);
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  return m;
}

std::vector<Matrix> dual_counterexample_triple() {
  Matrix a1 = Matrix::Zero(3, 3);
  a1(0, 0) = 1.0;
  a1(1, 1) = -1.0;
  a1(1, 2) = 1.0;
  a1(2, 1) = 1.0;
  Matrix a2 = Matrix::Zero(3, 3);
  a2(0, 2) = 1.0;
  a2(2, 0) = 1.0;
  Matrix a3 = Matrix::Zero(3, 3);
  a3(2, 2) = 1.0;
  return {a1, a2, a3};
}

// Hermitian matrix with zero diagonal: symmetrized complex Gaussian with the
// diagonal removed.
Matrix random_offdiagonal_hermitian(int d, Rng& rng) {
  Matrix x(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      x(i, j) = rng.cnormal();
    }
  }
  Matrix h = 0.5 * (x + x.adjoint().eval());
  h.diagonal().setZero();
  return h;
}

// Orthonormal Hermitian basis under the trace inner product: diagonal
// units, then for each i < j the real pair (E_ij + E_ji)/sqrt2 and
// i(E_ij - E_ji)/sqrt2.
std::vector<Matrix> hermitian_basis(int d) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    Matrix e = Matrix::Zero(d, d);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Matrix s = Matrix::Zero(d, d);
      s(i, j) = inv_sqrt2;
      s(j, i) = inv_sqrt2;
      basis.push_back(std::move(s));
      Matrix a = Matrix::Zero(d, d);
      a(i, j) = Complex(0.0, inv_sqrt2);
      a(j, i) = Complex(0.0, -inv_sqrt2);
      basis.push_back(std::move(a));
    }
  }
  return basis;
}

// The tr-2 identity-state triple profile with the removable s = 0
// singularity handled by its limit.
double qubit3_bracket_over_s(double s, double epsilon) {
  if (s < 1e-5) {
    // First-order expansion of the bracket around s = 0; the linear term
    // is 2 e^{-1/4eps} (1 - 1/(2 eps)) s.
    return 2.0 * std::exp(-1.0 / (4.0 * epsilon)) *
           (1.0 - 1.0 / (2.0 * epsilon));
  }
  const double up = std::exp(-(s + 1.0) * (s + 1.0) / (4.0 * epsilon)) *
                    (s + 1.0);
  const double down = std::exp(-(s - 1.0) * (s - 1.0) / (4.0 * epsilon)) *
                      (s - 1.0);
  return (up + down) / s;
}

}  // namespace

Matrix pauli_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

Matrix pauli_y() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = Complex(0.0, -1.0);
  m(1, 0) = Complex(0.0, 1.0);
  return m;
}

Matrix pauli_z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

std::vector<std::string> example_names() {
  return {"pauli2",          "pauli3",           "heart",
          "dual-counterexample", "dihedral-5",   "nearly-commuting",
          "commuting-demo"};
}

NamedExample make_pauli2(const Eigen::Vector3d& bloch) {
  if (bloch.norm() > 1.0 + 1e-12) {
    throw NotDensity("pauli2: Bloch vector has norm " +
                     std::to_string(bloch.norm()) + " > 1");
  }
  Matrix rho = 0.5 * (Matrix::Identity(2, 2) + bloch(0) * pauli_x() +
                      bloch(1) * pauli_y() + bloch(2) * pauli_z());
  return NamedExample{
      "pauli2",
      OperatorTuple::validate({pauli_x(), pauli_y()}),
      DensityMatrix::validate(std::move(rho)),
      "Qubit pair (sigma_x, sigma_y); state set by a Bloch vector."};
}

Matrix dihedral_shift(int p) {
  Matrix shift = Matrix::Zero(p, p);
  for (int j = 0; j < p; ++j) {
    shift((j + 1) % p, j) = 1.0;
  }
  return shift;
}

Matrix dihedral_reflection(int p) {
  Matrix refl = Matrix::Zero(p, p);
  for (int j = 0; j < p; ++j) {
    refl((p - j) % p, j) = 1.0;
  }
  return refl;
}

Matrix dihedral_twirl(const Matrix& x) {
  const int p = static_cast<int>(x.rows());
  if (x.cols() != p || p < 1) {
    throw DimensionMismatch("dihedral_twirl: needs a square matrix");
  }
  const Matrix shift = dihedral_shift(p);
  Matrix out = Matrix::Zero(p, p);
  Matrix power = Matrix::Identity(p, p);
  for (int k = 0; k < p; ++k) {
    out += 2.0 * std::cos(2.0 * kPi * k / p) *
           (power * x * power.adjoint());
    power = shift * power;
  }
  return out / static_cast<double>(p);
}

RealMatrix dihedral_twirl_matrix(int p) {
  const std::vector<Matrix> basis = hermitian_basis(p);
  const int dim = static_cast<int>(basis.size());
  RealMatrix m(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const Matrix image = dihedral_twirl(basis[col]);
    for (int row = 0; row < dim; ++row) {
      m(row, col) = (basis[row].adjoint() * image).trace().real();
    }
  }
  return m;
}

int dihedral_twirl_rank(int p, double rel_threshold) {
  const RealMatrix m = dihedral_twirl_matrix(p);
  Eigen::JacobiSVD<RealMatrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) {
    return 0;
  }
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_threshold * sv(0)) {
      ++rank;
    }
  }
  return rank;
}

double dihedral_twirl_idempotence_defect(int p) {
  const RealMatrix m = dihedral_twirl_matrix(p);
  return (m * m - m).cwiseAbs().maxCoeff();
}

NamedExample dihedral_multiplet(int p, std::uint64_t seed) {
  if (p <= 2) {
    throw Error("dihedral_multiplet: needs p > 2, got " + std::to_string(p));
  }
  Rng rng(seed);
  // Work in the frequency-mode presentation: for each diagonal offset f the
  // shift-equivariant mode sum_j omega^{-j} |j+f><j| rotates by e^{2 pi i/p}
  // under shift conjugation. A reflection-compatible combination B fixes
  // the phase of each coefficient, leaving one real parameter per offset;
  // its Hermitian and anti-Hermitian parts then transform exactly like a
  // planar vector (rotation by 2 pi/p) with reflection diag(-1, 1).
  const Complex omega = std::polar(1.0, 2.0 * kPi / p);
  Matrix b = Matrix::Zero(p, p);
  for (int f = 0; f < p; ++f) {
    const Complex coeff =
        rng.normal() * std::polar(1.0, kPi / 2.0 - kPi * f / p);
    for (int j = 0; j < p; ++j) {
      b((j + f) % p, j) += coeff * std::pow(omega, -j);
    }
  }
  Matrix a1 = 0.5 * (b + b.adjoint().eval());
  Matrix a2 = (b - b.adjoint().eval()) / Complex(0.0, 2.0);
  OperatorTuple raw = OperatorTuple::validate({a1, a2});
  const double scale = raw.spectral_scale();
  if (scale > 0.0) {
    a1 /= scale;
    a2 /= scale;
  }
  return NamedExample{
      "dihedral-" + std::to_string(p),
      OperatorTuple::validate({std::move(a1), std::move(a2)}),
      DensityMatrix::maximally_mixed(p),
      "Seeded pair transforming under the planar rotation action of the "
      "dihedral group D_" +
          std::to_string(p) + " on the permutation module."};
}

NamedExample make_nearly_commuting(double eps_prime, std::uint64_t seed) {
  if (eps_prime < 0.0) {
    throw Error("make_nearly_commuting: coupling scale must be >= 0");
  }
  const int d = 5;
  // Five diagonal points: the square corners and a rooftop point.
  Matrix d1 = Matrix::Zero(d, d);
  Matrix d2 = Matrix::Zero(d, d);
  const double pts[5][2] = {
      {-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}, {0.0, 2.0}};
  for (int i = 0; i < d; ++i) {
    d1(i, i) = pts[i][0];
    d2(i, i) = pts[i][1];
  }
  Rng rng(seed);
  const Matrix e1 = random_offdiagonal_hermitian(d, rng);
  const Matrix e2 = random_offdiagonal_hermitian(d, rng);
  return NamedExample{
      "nearly-commuting",
      OperatorTuple::validate({d1 + eps_prime * e1, d2 + eps_prime * e2}),
      DensityMatrix::maximally_mixed(d),
      "Five commuting diagonal points with seeded off-diagonal couplings "
      "of size " +
          std::to_string(eps_prime) + "."};
}

NamedExample make_example(const std::string& name, std::uint64_t seed) {
  if (name == "pauli2") {
    return make_pauli2(Eigen::Vector3d::Zero());
  }
  if (name == "pauli3") {
    return NamedExample{
        "pauli3",
        OperatorTuple::validate({pauli_x(), pauli_y(), pauli_z()}),
        DensityMatrix::maximally_mixed(2),
        "Qubit triple (sigma_x, sigma_y, sigma_z), maximally mixed state."};
  }
  if (name == "heart") {
    return NamedExample{
        "heart",
        OperatorTuple::validate({heart_a1(), heart_a2()}),
        DensityMatrix::maximally_mixed(3),
        "3x3 real pair whose singular curve is a heart-shaped quartic."};
  }
  if (name == "dual-counterexample") {
    return NamedExample{
        "dual-counterexample",
        OperatorTuple::validate(dual_counterexample_triple()),
        DensityMatrix::maximally_mixed(3),
        "3x3 triple whose singular surface closure ignores an extra real "
        "line of its defining polynomial."};
  }
  if (name.rfind("dihedral-", 0) == 0) {
    const std::string suffix = name.substr(9);
    int p = 0;
    try {
      p = std::stoi(suffix);
    } catch (const std::exception&) {
      throw UnknownExample("bad dihedral order in example name: " + name);
    }
    return dihedral_multiplet(p, seed);
  }
  if (name == "nearly-commuting") {
    return make_nearly_commuting(0.05, seed);
  }
  if (name == "commuting-demo") {
    Matrix a = Matrix::Zero(2, 2);
    a(1, 1) = 1.0;
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 0.25;
    rho(1, 1) = 0.75;
    return NamedExample{
        "commuting-demo",
        OperatorTuple::validate({a, a}),
        DensityMatrix::validate(std::move(rho)),
        "Commuting diagonal pair: point masses 1/4 and 3/4 at the joint "
        "eigenvalues (0,0) and (1,1)."};
  }
  throw UnknownExample("no catalog entry named '" + name + "'");
}

double qubit3_radial(double s, double epsilon) {
  if (s < 0.0) {
    throw Error("qubit3_radial: radius must be >= 0");
  }
  if (epsilon <= 0.0) {
    throw Error("qubit3_radial: epsilon must be > 0");
  }
  return qubit3_bracket_over_s(s, epsilon) /
         (8.0 * std::pow(kPi, 1.5) * std::pow(epsilon, 1.5));
}

double qubit2_reference(double r, double epsilon) {
  if (r < 0.0) {
    throw Error("qubit2_reference: radius must be >= 0");
  }
  if (epsilon <= 0.0) {
    throw Error("qubit2_reference: epsilon must be > 0");
  }
  const Complex shifted(epsilon, -1.0);  // eps - i lambda at lambda = 1
  const Complex z = shifted * shifted + r * r;
  if (z.imag() == 0.0 && z.real() < 0.0) {
    throw BranchAmbiguity(
        "qubit2_reference: argument on the negative real axis");
  }
  const Complex value =
      Complex(0.0, 1.0) * shifted * std::pow(z, -1.5);
  return value.imag() / (2.0 * kPi);
}

double qubit2_regular_part(double r) {
  if (r < 0.0 || r >= 1.0) {
    throw Error("qubit2_regular_part: valid for 0 <= r < 1");
  }
  return -1.0 / (2.0 * kPi * std::pow(1.0 - r * r, 1.5));
}

double qubit_wigner_state_factor(const RealVector& a,
                                 const RealVector& bloch) {
  if (a.size() != bloch.size()) {
    throw DimensionMismatch(
        "qubit_wigner_state_factor: point and Bloch vector sizes differ");
  }
  if (bloch.norm() > 1.0 + 1e-12) {
    throw NotDensity("qubit_wigner_state_factor: Bloch vector outside the "
                     "unit ball");
  }
  return 0.5 * (1.0 + bloch.dot(a));
}

double qubit2_normalization(double epsilon) {
  if (epsilon <= 0.0) {
    throw Error("qubit2_normalization: epsilon must be > 0");
  }
  // Head on [0, cut] directly; tail via u = 1/r, whose integrand
  // W(1/u)/u^3 is smooth down to u = 0.
  const double cut = 10.0;
  const auto head_f = [epsilon](double r) {
    return r * qubit2_reference(r, epsilon);
  };
  const auto tail_f = [epsilon](double u) {
    return qubit2_reference(1.0 / u, epsilon) / (u * u * u);
  };
  const double head = Quadrature::integrate(head_f, 0.0, cut, 12, 1e-12);
  const double tail =
      Quadrature::integrate(tail_f, 0.0, 1.0 / cut, 12, 1e-12);
  return 2.0 * kPi * (head + tail);
}

double qubit3_moment(int power, double epsilon) {
  if (epsilon <= 0.0) {
    throw Error("qubit3_moment: epsilon must be > 0");
  }
  if (power < 0) {
    throw Error("qubit3_moment: power must be >= 0");
  }
  // The profile is concentrated near s = 1 with Gaussian width ~ sqrt(eps);
  // beyond 1 + 12 sqrt(eps) the mass is negligible at double precision.
  const double hi = 1.0 + 12.0 * std::sqrt(epsilon);
  const auto f = [power, epsilon](double s) {
    return std::pow(s, power) * qubit3_radial(s, epsilon);
  };
  return 4.0 * kPi * Quadrature::integrate(f, 0.0, hi, 12, 1e-13);
}

double qubit3_paradox_variance(double epsilon) {
  // Unit-trace state: halve the tr-2 reference moments.
  const double second = qubit3_moment(4, epsilon) / 2.0;
  const double first = qubit3_moment(3, epsilon) / 2.0;
  return second - first * first;
}

double qubit3_paradox_extrapolated(double epsilon) {
  return 2.0 * qubit3_paradox_variance(epsilon / 2.0) -
         qubit3_paradox_variance(epsilon);
}

}  // namespace qwig
