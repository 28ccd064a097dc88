#include "qwig/charfn.hpp"

#include <cmath>
#include <sstream>

namespace qwig {

namespace {

// Shared core: sum_i e^{i t alpha_i} <v_i| W |v_i> over the eigensystem of
// xi.A, in ascending-eigenvalue order (fixed summation order for
// reproducibility).
Complex spectral_sum(const PencilEigen& eig, const Matrix& weight, double t) {
  Complex out(0.0, 0.0);
  for (int i = 0; i < eig.d(); ++i) {
    const double w =
        (eig.eigenvectors.col(i).adjoint() * weight * eig.eigenvectors.col(i))
            .value()
            .real();
    out += w * std::polar(1.0, t * eig.eigenvalues(i));
  }
  return out;
}

}  // namespace

Complex char_function_weighted(const OperatorTuple& a, const Matrix& weight,
                               const RealVector& xi, const Tolerances& tol) {
  return spectral_sum(pencil(a, xi, tol), weight, 1.0);
}

Complex char_function(const OperatorTuple& a, const DensityMatrix& rho,
                      const RealVector& xi, const Tolerances& tol) {
  return char_function_weighted(a, rho.matrix(), xi, tol);
}

Complex char_function_blocks(const OperatorTuple& a, const DensityMatrix& rho,
                             const std::vector<Matrix>& projections,
                             const RealVector& xi, const Tolerances& tol) {
  const int d = a.d();
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t l = 0; l < projections.size(); ++l) {
    const Matrix& q = projections[l];
    if (q.rows() != d || q.cols() != d) {
      throw DimensionMismatch("projection dimension does not match tuple");
    }
    if ((q * q - q).cwiseAbs().maxCoeff() > 1e-9 ||
        hermiticity_defect(q) > 1e-9) {
      std::ostringstream os;
      os << "block " << l << " is not an orthogonal projection";
      throw NotReducing(os.str());
    }
    for (std::size_t m = 0; m < l; ++m) {
      if ((q * projections[m]).cwiseAbs().maxCoeff() > 1e-9) {
        std::ostringstream os;
        os << "blocks " << l << " and " << m << " are not orthogonal";
        throw NotReducing(os.str());
      }
    }
    for (int k = 0; k < a.n(); ++k) {
      const double comm = (q * a.op(k) - a.op(k) * q).cwiseAbs().maxCoeff();
      if (comm > 1e-9) {
        std::ostringstream os;
        os << "block " << l << " does not commute with operator " << k
           << ": ||[Q, A]|| = " << comm;
        throw NotReducing(os.str());
      }
    }
    sum += q;
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9) {
    throw DimensionMismatch("projections do not sum to the identity");
  }

  Complex out(0.0, 0.0);
  for (const Matrix& q : projections) {
    const Matrix compressed = q * rho.matrix() * q;
    out += char_function_weighted(a, compressed, xi, tol);
  }
  return out;
}

CharRay::CharRay(const OperatorTuple& a, const DensityMatrix& rho,
                 const RealVector& xi0, const Tolerances& tol) {
  const PencilEigen eig = pencil(a, xi0, tol);
  alpha_.reserve(eig.d());
  weight_.reserve(eig.d());
  for (int i = 0; i < eig.d(); ++i) {
    alpha_.push_back(eig.eigenvalues(i));
    weight_.push_back((eig.eigenvectors.col(i).adjoint() * rho.matrix() *
                       eig.eigenvectors.col(i))
                          .value()
                          .real());
  }
}

Complex CharRay::eval(double t) const {
  Complex out(0.0, 0.0);
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    out += weight_[i] * std::polar(1.0, t * alpha_[i]);
  }
  return out;
}

std::vector<double> smeared_spectral_density(const OperatorTuple& a,
                                             const DensityMatrix& rho,
                                             const RealVector& u,
                                             double epsilon,
                                             const std::vector<double>& points,
                                             const Tolerances& tol) {
  const CharRay ray(a, rho, u, tol);
  const double sigma2 = 2.0 * epsilon * u.squaredNorm();
  const double norm = 1.0 / std::sqrt(2.0 * M_PI * sigma2);
  std::vector<double> out(points.size(), 0.0);
  for (std::size_t j = 0; j < points.size(); ++j) {
    double value = 0.0;
    for (std::size_t i = 0; i < ray.alphas().size(); ++i) {
      const double z = points[j] - ray.alphas()[i];
      value += ray.weights()[i] * norm * std::exp(-z * z / (2.0 * sigma2));
    }
    out[j] = value;
  }
  return out;
}

std::vector<double> smeared_spectral_bin_masses(
    const OperatorTuple& a, const DensityMatrix& rho, const RealVector& u,
    double epsilon, const std::vector<double>& edges, const Tolerances& tol) {
  const CharRay ray(a, rho, u, tol);
  const double sigma = std::sqrt(2.0 * epsilon * u.squaredNorm());
  std::vector<double> out;
  out.reserve(edges.size() - 1);
  auto cdf = [&](double x, double center) {
    return 0.5 * (1.0 + std::erf((x - center) / (sigma * std::sqrt(2.0))));
  };
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    double mass = 0.0;
    for (std::size_t i = 0; i < ray.alphas().size(); ++i) {
      mass += ray.weights()[i] * (cdf(edges[b + 1], ray.alphas()[i]) -
                                  cdf(edges[b], ray.alphas()[i]));
    }
    out.push_back(mass);
  }
  return out;
}

}  // namespace qwig
