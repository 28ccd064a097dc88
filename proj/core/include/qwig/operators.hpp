#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "qwig/errors.hpp"
#include "qwig/rng.hpp"
#include "qwig/tolerances.hpp"

namespace qwig {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Max-entry deviation from Hermiticity, max_ij |M_ij - conj(M_ji)|.
double hermiticity_defect(const Matrix& m);

// A validated tuple (A_1, ..., A_n) of Hermitian d x d matrices. Inputs are
// symmetrized to (M + M^*)/2 after passing the Hermiticity check so all
// downstream math sees exact Hermiticity.
class OperatorTuple {
 public:
  static OperatorTuple validate(std::vector<Matrix> raw,
                                const Tolerances& tol = {});

  int n() const { return static_cast<int>(ops_.size()); }
  int d() const { return static_cast<int>(ops_.front().rows()); }
  const Matrix& op(int k) const { return ops_.at(k); }
  const std::vector<Matrix>& ops() const { return ops_; }

  // Sum_k xi_k A_k.
  Matrix combine(const RealVector& xi) const;

  // max_k ||A_k||_2; the natural scale for relative tolerances.
  double spectral_scale() const;

 private:
  explicit OperatorTuple(std::vector<Matrix> ops) : ops_(std::move(ops)) {}
  std::vector<Matrix> ops_;
};

// A validated density matrix: Hermitian, positive semidefinite within
// tolerance, unit trace within tolerance.
class DensityMatrix {
 public:
  static DensityMatrix validate(Matrix raw, const Tolerances& tol = {});
  static DensityMatrix maximally_mixed(int d);
  static DensityMatrix pure(const Vector& psi, const Tolerances& tol = {});

  int d() const { return static_cast<int>(rho_.rows()); }
  const Matrix& matrix() const { return rho_; }

 private:
  explicit DensityMatrix(Matrix rho) : rho_(std::move(rho)) {}
  Matrix rho_;
};

// Eigendecomposition of a pencil value xi . A, with eigenvalues ascending and
// (near-)equal eigenvalues grouped into clusters. Cluster c covers the
// half-open index range [clusters[c].first, clusters[c].second).
struct PencilEigen {
  RealVector xi;
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;  // orthonormal columns, same order as eigenvalues
  std::vector<std::pair<int, int>> clusters;

  int d() const { return static_cast<int>(eigenvalues.size()); }
  double diameter() const {
    return eigenvalues(d() - 1) - eigenvalues(0);
  }
  // Distance from eigenvalue i to the nearest other eigenvalue.
  double gap(int i) const;
  // Orthogonal projector onto the cluster's eigenspace.
  Matrix projector(int cluster) const;
  // tr(P_c rho), evaluated as a sum of eigenvector sandwiches.
  double cluster_weight(int cluster, const DensityMatrix& rho) const;
};

// Decompose a single Hermitian matrix (degeneracy grouping at
// degeneracy_rel * spectral diameter).
PencilEigen eigendecompose(const Matrix& m, const Tolerances& tol = {});

// Decompose xi . A and record xi in the result.
PencilEigen pencil(const OperatorTuple& a, const RealVector& xi,
                   const Tolerances& tol = {});

// (<psi|A_1|psi>, ..., <psi|A_n|psi>) for a unit vector psi.
RealVector expectation_tuple(const OperatorTuple& a, const Vector& psi,
                             const Tolerances& tol = {});

// Seeded random matrix constructors (all entries from the deterministic Rng).
Matrix random_hermitian(int d, Rng& rng);
Matrix random_real_symmetric(int d, Rng& rng);
Matrix random_psd(int d, Rng& rng);
Matrix random_unitary(int d, Rng& rng);

}  // namespace qwig
