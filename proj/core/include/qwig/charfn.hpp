#pragma once

#include <vector>

#include "qwig/operators.hpp"

namespace qwig {

// Characteristic function tr(rho e^{i xi.A}), evaluated through the
// eigendecomposition of xi.A as sum_mu e^{i alpha_mu} tr(rho P_mu).
Complex char_function(const OperatorTuple& a, const DensityMatrix& rho,
                      const RealVector& xi, const Tolerances& tol = {});

// Same sum with an arbitrary Hermitian weight operator in place of rho
// (used for unnormalized block compressions).
Complex char_function_weighted(const OperatorTuple& a, const Matrix& weight,
                               const RealVector& xi,
                               const Tolerances& tol = {});

// Block-decomposed evaluation: sum_l tr(Q_l rho Q_l e^{i xi.A}) for a family
// of mutually orthogonal projections Q_l commuting with every A_k. Equal to
// char_function by construction; the point is that the off-diagonal blocks
// of rho provably never enter.
// Throws NotReducing if some ||[Q_l, A_k]|| exceeds the tolerance, and
// DimensionMismatch if the family does not resolve the identity.
Complex char_function_blocks(const OperatorTuple& a, const DensityMatrix& rho,
                             const std::vector<Matrix>& projections,
                             const RealVector& xi, const Tolerances& tol = {});

// One decomposition of a fixed direction serves every radial multiple:
// alpha_mu(t xi0) = t alpha_mu(xi0) and P_mu(t xi0) = P_mu(xi0) for t > 0,
// and values at t < 0 follow by conjugation symmetry of the spectrum sum.
// The grid module keys instances of this on primitive integer dual vectors.
class CharRay {
 public:
  CharRay(const OperatorTuple& a, const DensityMatrix& rho,
          const RealVector& xi0, const Tolerances& tol = {});

  // tr(rho e^{i t (xi0 . A)}) for any real t.
  Complex eval(double t) const;

  // Spectrum of xi0.A (ascending) and the per-eigenvector state weights;
  // exact delta-locations and masses of the marginal along xi0.
  const std::vector<double>& alphas() const { return alpha_; }
  const std::vector<double>& weights() const { return weight_; }

 private:
  std::vector<double> alpha_;
  std::vector<double> weight_;
};

// Exact marginal comparison target: the spectral distribution of u.A in
// state rho smeared with the 1-D Gaussian of variance 2 epsilon |u|^2,
// evaluated at the given points.
std::vector<double> smeared_spectral_density(const OperatorTuple& a,
                                             const DensityMatrix& rho,
                                             const RealVector& u,
                                             double epsilon,
                                             const std::vector<double>& points,
                                             const Tolerances& tol = {});

// The same measure integrated over bins [edges[i], edges[i+1]] (via erf),
// for L1 comparisons against binned grid marginals.
std::vector<double> smeared_spectral_bin_masses(
    const OperatorTuple& a, const DensityMatrix& rho, const RealVector& u,
    double epsilon, const std::vector<double>& edges,
    const Tolerances& tol = {});

}  // namespace qwig
