#include "qwig/operators.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace qwig {

double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

OperatorTuple OperatorTuple::validate(std::vector<Matrix> raw,
                                      const Tolerances& tol) {
  if (raw.empty()) {
    throw DimensionMismatch("operator tuple must be nonempty");
  }
  const Eigen::Index d = raw.front().rows();
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const Matrix& m = raw[k];
    if (m.rows() != m.cols()) {
      std::ostringstream os;
      os << "operator " << k << " is not square: " << m.rows() << "x"
         << m.cols();
      throw DimensionMismatch(os.str());
    }
    if (m.rows() != d) {
      std::ostringstream os;
      os << "operator " << k << " is " << m.rows() << "x" << m.cols()
         << ", expected " << d << "x" << d;
      throw DimensionMismatch(os.str());
    }
    const double defect = hermiticity_defect(m);
    if (defect > tol.hermiticity) {
      std::ostringstream os;
      os << "operator " << k << " is not Hermitian: max |M - M^*| = " << defect;
      throw NotHermitian(os.str());
    }
    raw[k] = 0.5 * (m + m.adjoint().eval());
  }
  return OperatorTuple(std::move(raw));
}

Matrix OperatorTuple::combine(const RealVector& xi) const {
  if (xi.size() != n()) {
    std::ostringstream os;
    os << "coefficient vector has length " << xi.size() << ", tuple has n = "
       << n();
    throw DimensionMismatch(os.str());
  }
  Matrix out = Matrix::Zero(d(), d());
  for (int k = 0; k < n(); ++k) {
    out += xi(k) * ops_[k];
  }
  return out;
}

double OperatorTuple::spectral_scale() const {
  double scale = 0.0;
  for (const Matrix& m : ops_) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m,
                                                 Eigen::EigenvaluesOnly);
    scale = std::max(scale, solver.eigenvalues().cwiseAbs().maxCoeff());
  }
  return scale;
}

DensityMatrix DensityMatrix::validate(Matrix raw, const Tolerances& tol) {
  if (raw.rows() != raw.cols()) {
    throw DimensionMismatch("state matrix is not square");
  }
  const double defect = hermiticity_defect(raw);
  if (defect > tol.hermiticity) {
    std::ostringstream os;
    os << "state is not Hermitian: max |M - M^*| = " << defect;
    throw NotHermitian(os.str());
  }
  raw = 0.5 * (raw + raw.adjoint().eval());
  const double tr = raw.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    std::ostringstream os;
    os << "state trace is " << tr << ", expected 1";
    throw NotDensity(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(raw, Eigen::EigenvaluesOnly);
  const double lambda_min = solver.eigenvalues().minCoeff();
  if (lambda_min < -tol.psd) {
    std::ostringstream os;
    os << "state has negative eigenvalue " << lambda_min;
    throw NotDensity(os.str());
  }
  return DensityMatrix(std::move(raw));
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::pure(const Vector& psi, const Tolerances& tol) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > tol.normalized) {
    std::ostringstream os;
    os << "vector norm is " << norm << ", expected 1";
    throw NotNormalized(os.str());
  }
  return DensityMatrix(psi * psi.adjoint());
}

double PencilEigen::gap(int i) const {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < d(); ++j) {
    if (j != i) {
      best = std::min(best, std::abs(eigenvalues(i) - eigenvalues(j)));
    }
  }
  return best;
}

Matrix PencilEigen::projector(int cluster) const {
  const auto [begin, end] = clusters.at(cluster);
  Matrix p = Matrix::Zero(d(), d());
  for (int i = begin; i < end; ++i) {
    p += eigenvectors.col(i) * eigenvectors.col(i).adjoint();
  }
  return p;
}

double PencilEigen::cluster_weight(int cluster,
                                   const DensityMatrix& rho) const {
  const auto [begin, end] = clusters.at(cluster);
  double w = 0.0;
  for (int i = begin; i < end; ++i) {
    w += (eigenvectors.col(i).adjoint() * rho.matrix() * eigenvectors.col(i))
             .value()
             .real();
  }
  return w;
}

PencilEigen eigendecompose(const Matrix& m, const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint().eval()));
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("self-adjoint eigensolver did not converge");
  }
  PencilEigen out;
  out.xi = RealVector();
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  const int d = out.d();
  const double diameter = out.eigenvalues(d - 1) - out.eigenvalues(0);
  const double threshold = tol.degeneracy_rel * std::max(diameter, 1e-300);
  int begin = 0;
  for (int i = 1; i <= d; ++i) {
    if (i == d ||
        out.eigenvalues(i) - out.eigenvalues(i - 1) > threshold) {
      out.clusters.emplace_back(begin, i);
      begin = i;
    }
  }
  return out;
}

PencilEigen pencil(const OperatorTuple& a, const RealVector& xi,
                   const Tolerances& tol) {
  PencilEigen out = eigendecompose(a.combine(xi), tol);
  out.xi = xi;
  return out;
}

RealVector expectation_tuple(const OperatorTuple& a, const Vector& psi,
                             const Tolerances& tol) {
  if (psi.size() != a.d()) {
    throw DimensionMismatch("vector length does not match tuple dimension");
  }
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > tol.normalized) {
    std::ostringstream os;
    os << "vector norm is " << norm << ", expected 1";
    throw NotNormalized(os.str());
  }
  RealVector out(a.n());
  for (int k = 0; k < a.n(); ++k) {
    out(k) = (psi.adjoint() * a.op(k) * psi).value().real();
  }
  return out;
}

Matrix random_hermitian(int d, Rng& rng) {
  Matrix x(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      x(i, j) = rng.cnormal();
    }
  }
  return 0.5 * (x + x.adjoint().eval());
}

Matrix random_real_symmetric(int d, Rng& rng) {
  Matrix x(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      x(i, j) = Complex(rng.normal(), 0.0);
    }
  }
  return 0.5 * (x + x.transpose().eval());
}

Matrix random_psd(int d, Rng& rng) {
  Matrix x(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      x(i, j) = rng.cnormal();
    }
  }
  return x * x.adjoint();
}

Matrix random_unitary(int d, Rng& rng) {
  Matrix x(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      x(i, j) = rng.cnormal();
    }
  }
  Eigen::HouseholderQR<Matrix> qr(x);
  Matrix q = qr.householderQ();
  // Fix the phase freedom so the result is a deterministic function of the
  // Gaussian draw (R's diagonal phases folded into Q).
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const Complex diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0) {
      q.col(j) *= diag / mag;
    }
  }
  return q;
}

}  // namespace qwig
