#pragma once

#include <vector>

#include "qwig/operators.hpp"

namespace qwig {

// Deterministic quasi-uniform direction sets. Antipodal directions carry the
// same information (branches reversed), so only a half circle / half sphere
// is covered.
std::vector<RealVector> circle_directions(int count);
std::vector<RealVector> fibonacci_half_sphere(int count);

// Support-function sample of the expectation-range body: value = largest
// eigenvalue of u.A. When the top eigenvalue is simple the unique boundary
// point (the top eigenvector's expectation tuple) is attached.
struct SupportSample {
  RealVector u;
  double value = 0.0;
  bool top_degenerate = false;
  RealVector point;  // meaningful only when !top_degenerate
};

std::vector<SupportSample> jnr_boundary(const OperatorTuple& a,
                                        const std::vector<RealVector>& dirs,
                                        const Tolerances& tol = {});

// One sampled point of the singular set: branch mu of the pencil u.A with a
// clean spectral gap contributes the eigenvector expectation tuple.
struct SingularSample {
  RealVector u;
  int branch = 0;
  RealVector a;
  double gap = 0.0;
};

// Sample the singular set over `resolution` directions (half circle for
// n = 2, Fibonacci half sphere for n = 3). Branches with gap below
// singular_gap_rel * (max spectral diameter) are dropped, not extrapolated.
std::vector<SingularSample> singular_set(const OperatorTuple& a,
                                         int resolution,
                                         const Tolerances& tol = {});

// The published algebraic certificates for the two catalog systems with
// known singular curves.
enum class SingularPolynomial {
  kDualCounterexample,  // 3-variable sextic-type surface polynomial
  kHeartQuartic,        // 2-variable quartic curve
};

double singular_polynomial_value(const RealVector& a, SingularPolynomial which);

// max |p(a)| over the points.
double polynomial_residual(const std::vector<RealVector>& points,
                           SingularPolynomial which);

// Gap between the two largest eigenvalues of u.A per direction; a vanishing
// gap signals a flat boundary piece (failure of strict convexity).
struct ConvexityReport {
  double min_gap = 0.0;
  double threshold = 0.0;
  std::vector<RealVector> flagged;  // directions with gap < threshold
};

ConvexityReport strict_convexity_probe(const OperatorTuple& a,
                                       const std::vector<RealVector>& dirs,
                                       const Tolerances& tol = {});

// Eigenvalue curves of C(t) = A_1 cos t + A_2 sin t for a pair. Branches are
// the ascending-order curves; parameters where the minimal gap falls below
// the degeneracy threshold are flagged as ambiguous rather than re-matched.
struct EigenvalueCurves {
  std::vector<double> t;
  RealMatrix curves;             // d rows (branches), one column per t
  std::vector<int> ambiguous;    // column indices with unresolvably small gap
};

EigenvalueCurves eigenvalue_curves(const OperatorTuple& pair,
                                   const std::vector<double>& t_samples,
                                   const Tolerances& tol = {});

// Recover the singular-set point from one branch value and derivative:
// a = [[cos t, -sin t], [sin t, cos t]] . (c, cdot).
RealVector reconstruct_from_curve(double c, double cdot, double t);

// Reconstruction applied along one branch of a computed curve family, with
// central finite differences for cdot. Only interior parameter samples
// contribute; `columns[i]` records which t-sample `points[i]` came from.
struct CurveReconstruction {
  std::vector<int> columns;
  std::vector<RealVector> points;
};

// Ambiguous columns are skipped by default; with skip_ambiguous = false the
// first one encountered raises DegenerateBranch instead.
CurveReconstruction reconstruct_curve_points(const EigenvalueCurves& curves,
                                             int branch,
                                             bool skip_ambiguous = true);

// Singular ellipse of a 2x2 compression: points center + axes . (cos phi,
// sin phi). The axes matrix may have rank < 2 (segment) or 0 (point).
struct Ellipse2D {
  int i = 0;
  int j = 0;  // compressed coordinate pair
  RealVector center;
  RealMatrix axes;  // 2 x 2
};

// Prediction for a nearly commuting pair presented in the near-diagonal
// basis: the singular set is close to the union of the compression ellipses
// of all coordinate pairs together with the diagonal expectation points.
struct EllipsePrediction {
  std::vector<Ellipse2D> ellipses;
  std::vector<RealVector> diagonal_points;
  double offdiag_max = 0.0;  // size of the perturbation actually present
};

EllipsePrediction nearly_commuting_ellipses(const OperatorTuple& pair);

// Distance from one point to the sampled prediction set.
double distance_to_prediction(const RealVector& point,
                              const EllipsePrediction& prediction,
                              int samples_per_ellipse = 512);

// One-sided Hausdorff distance: max over sampled singular points of the
// distance to the prediction. (Sampling cannot certify the reverse
// inclusion, so only this direction is reported.)
double hausdorff_to_prediction(const std::vector<SingularSample>& samples,
                               const EllipsePrediction& prediction,
                               int samples_per_ellipse = 512);

// Support-sample outer hull test: a is inside iff u.a <= m(u) + slack for
// every sampled direction.
bool inside_support_hull(const RealVector& a,
                         const std::vector<SupportSample>& support,
                         double slack);

}  // namespace qwig
