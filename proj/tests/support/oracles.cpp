#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "qwig/errors.hpp"

namespace qwig::test {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Matrix expm_reference(const Matrix& m) {
  const Eigen::Index d = m.rows();
  if (m.cols() != d) {
    throw DimensionMismatch("expm_reference: matrix must be square");
  }
  // Scale until the 1-norm is below 1/2, Taylor-sum to machine precision,
  // then square back up.
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  double scale = 1.0;
  while (norm1 * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  const Matrix ms = m * scale;
  Matrix term = Matrix::Identity(d, d);
  Matrix sum = term;
  for (int k = 1; k <= 40; ++k) {
    term = (term * ms) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) {
      break;
    }
  }
  for (int s = 0; s < squarings; ++s) {
    sum = (sum * sum).eval();
  }
  return sum;
}

Complex char_reference(const OperatorTuple& a, const DensityMatrix& rho,
                       const RealVector& xi) {
  const Matrix arg = Complex(0.0, 1.0) * a.combine(xi);
  return (rho.matrix() * expm_reference(arg)).trace();
}

Matrix weyl_moment_bruteforce(const OperatorTuple& a, const MultiIndex& r) {
  if (static_cast<int>(r.size()) != a.n()) {
    throw DimensionMismatch("weyl_moment_bruteforce: index length mismatch");
  }
  std::vector<int> word;
  for (int k = 0; k < a.n(); ++k) {
    if (r[k] < 0) {
      throw Error("weyl_moment_bruteforce: negative exponent");
    }
    word.insert(word.end(), r[k], k);
  }
  const int d = a.d();
  if (word.empty()) {
    return Matrix::Identity(d, d);
  }
  std::sort(word.begin(), word.end());
  Matrix sum = Matrix::Zero(d, d);
  long count = 0;
  do {
    Matrix prod = Matrix::Identity(d, d);
    for (int k : word) {
      prod = (prod * a.op(k)).eval();
    }
    sum += prod;
    ++count;
  } while (std::next_permutation(word.begin(), word.end()));
  return sum / static_cast<double>(count);
}

RealVector eigenvalue_gradient_fd(const OperatorTuple& a, const RealVector& xi,
                                  int branch, double h) {
  const auto branch_value = [&](const RealVector& at) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.combine(at));
    return solver.eigenvalues()(branch);
  };
  RealVector grad(a.n());
  for (int k = 0; k < a.n(); ++k) {
    RealVector hi = xi;
    RealVector lo = xi;
    hi(k) += h;
    lo(k) -= h;
    grad(k) = (branch_value(hi) - branch_value(lo)) / (2.0 * h);
  }
  return grad;
}

double commuting_gaussian_sum(const std::vector<RealVector>& means,
                              const std::vector<double>& weights,
                              double epsilon, const RealVector& x) {
  if (means.size() != weights.size()) {
    throw DimensionMismatch("commuting_gaussian_sum: size mismatch");
  }
  const double var = 2.0 * epsilon;
  double total = 0.0;
  for (std::size_t j = 0; j < means.size(); ++j) {
    const RealVector diff = x - means[j];
    const double quad = diff.squaredNorm() / (2.0 * var);
    const double norm =
        std::pow(2.0 * kPi * var, -0.5 * static_cast<double>(x.size()));
    total += weights[j] * norm * std::exp(-quad);
  }
  return total;
}

double commuting_gaussian_sum_gradient(const std::vector<RealVector>& means,
                                       const std::vector<double>& weights,
                                       double epsilon, const RealVector& x,
                                       int axis) {
  const double var = 2.0 * epsilon;
  double total = 0.0;
  for (std::size_t j = 0; j < means.size(); ++j) {
    const RealVector diff = x - means[j];
    const double quad = diff.squaredNorm() / (2.0 * var);
    const double norm =
        std::pow(2.0 * kPi * var, -0.5 * static_cast<double>(x.size()));
    total += weights[j] * norm * std::exp(-quad) * (-diff(axis) / var);
  }
  return total;
}

std::vector<double> direct_dual_sum(const OperatorTuple& a,
                                    const DensityMatrix& rho,
                                    const GridSpec& spec, int nyquist_factor) {
  spec.validate();
  if (nyquist_factor < 1) {
    throw Error("direct_dual_sum: nyquist_factor must be >= 1");
  }
  const int n = spec.n();

  // Dual lattice: spacing 2 pi / L_k per axis, nyquist_factor * N_k samples
  // in fftfreq order (signed integers m with -N'/2 <= m < N'/2).
  std::vector<std::vector<double>> freqs(n);
  for (int k = 0; k < n; ++k) {
    const int nk = spec.samples[k] * nyquist_factor;
    freqs[k].resize(nk);
    for (int m = 0; m < nk; ++m) {
      const int signed_m = (m < (nk + 1) / 2) ? m : m - nk;
      freqs[k][m] = 2.0 * kPi * signed_m / spec.length(k);
    }
  }

  // Precompute the damped characteristic function on the whole dual lattice.
  std::vector<int> idx(n, 0);
  std::size_t dual_total = 1;
  for (int k = 0; k < n; ++k) {
    dual_total *= freqs[k].size();
  }
  std::vector<Complex> damped(dual_total);
  std::vector<RealVector> xis(dual_total, RealVector(n));
  for (std::size_t flat = 0; flat < dual_total; ++flat) {
    RealVector xi(n);
    std::size_t rest = flat;
    for (int k = n - 1; k >= 0; --k) {
      const std::size_t nk = freqs[k].size();
      xi(k) = freqs[k][rest % nk];
      rest /= nk;
    }
    xis[flat] = xi;
    damped[flat] = char_function(a, rho, xi) *
                   std::exp(-spec.epsilon * xi.squaredNorm());
  }

  // Brute-force inverse transform at the cell centers of the original spec.
  double volume = 1.0;
  for (int k = 0; k < n; ++k) {
    volume *= spec.length(k);
  }
  std::vector<std::vector<double>> centers(n);
  for (int k = 0; k < n; ++k) {
    centers[k] = spec.centers(k);
  }
  const std::size_t cells = spec.total_cells();
  std::vector<double> out(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    RealVector x(n);
    std::size_t rest = cell;
    for (int k = n - 1; k >= 0; --k) {
      x(k) = centers[k][rest % centers[k].size()];
      rest /= centers[k].size();
    }
    Complex acc(0.0, 0.0);
    for (std::size_t flat = 0; flat < dual_total; ++flat) {
      acc += damped[flat] * std::exp(Complex(0.0, -xis[flat].dot(x)));
    }
    out[cell] = acc.real() / volume;
  }
  return out;
}

JointSpectrum joint_spectrum(const OperatorTuple& a, const DensityMatrix& rho,
                             double tol_offdiag) {
  // Diagonalize a generic fixed-coefficient combination; for a commuting
  // tuple with that combination nondegenerate, its eigenbasis diagonalizes
  // every member simultaneously.
  RealVector coeff(a.n());
  for (int k = 0; k < a.n(); ++k) {
    coeff(k) = 1.0 + 0.1 * std::sqrt(2.0 + k);  // irrational spacings
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.combine(coeff));
  const Matrix& v = solver.eigenvectors();
  const int d = a.d();
  JointSpectrum out;
  out.points.assign(d, RealVector(a.n()));
  out.weights.assign(d, 0.0);
  for (int k = 0; k < a.n(); ++k) {
    const Matrix rotated = v.adjoint() * a.op(k) * v;
    double offdiag = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (i != j) {
          offdiag = std::max(offdiag, std::abs(rotated(i, j)));
        }
      }
    }
    if (offdiag > tol_offdiag) {
      throw Error("joint_spectrum: tuple is not commuting (off-diagonal " +
                  std::to_string(offdiag) + ")");
    }
    for (int j = 0; j < d; ++j) {
      out.points[j](k) = rotated(j, j).real();
    }
  }
  for (int j = 0; j < d; ++j) {
    out.weights[j] = (v.col(j).adjoint() * rho.matrix() * v.col(j))(0).real();
  }
  return out;
}

}  // namespace qwig::test
