#include "qwig/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace qwig {

namespace {

constexpr double kPi = std::numbers::pi;

// Largest pencil spectral diameter over a direction set; the natural scale
// for gap thresholds.
double max_pencil_diameter(const std::vector<PencilEigen>& pencils) {
  double diam = 0.0;
  for (const auto& pe : pencils) {
    diam = std::max(diam, pe.diameter());
  }
  return diam;
}

std::vector<PencilEigen> decompose_all(const OperatorTuple& a,
                                       const std::vector<RealVector>& dirs,
                                       const Tolerances& tol) {
  std::vector<PencilEigen> out;
  out.reserve(dirs.size());
  for (const auto& u : dirs) {
    out.push_back(pencil(a, u, tol));
  }
  return out;
}

}  // namespace

std::vector<RealVector> circle_directions(int count) {
  if (count < 1) {
    throw Error("circle_directions: count must be positive, got " +
                std::to_string(count));
  }
  std::vector<RealVector> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double theta = kPi * k / count;
    RealVector u(2);
    u << std::cos(theta), std::sin(theta);
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<RealVector> fibonacci_half_sphere(int count) {
  if (count < 1) {
    throw Error("fibonacci_half_sphere: count must be positive, got " +
                std::to_string(count));
  }
  // Lay a Fibonacci lattice over the full sphere and keep the z >= 0 half;
  // with 2*count points that leaves exactly `count` directions.
  const int total = 2 * count;
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  std::vector<RealVector> out;
  out.reserve(count);
  for (int i = 0; i < total; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / total;
    if (z < 0.0) {
      continue;
    }
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double theta = golden_angle * i;
    RealVector u(3);
    u << r * std::cos(theta), r * std::sin(theta), z;
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<SupportSample> jnr_boundary(const OperatorTuple& a,
                                        const std::vector<RealVector>& dirs,
                                        const Tolerances& tol) {
  if (dirs.empty()) {
    throw Error("jnr_boundary: need at least one direction");
  }
  std::vector<SupportSample> out;
  out.reserve(dirs.size());
  for (const auto& u : dirs) {
    const PencilEigen pe = pencil(a, u, tol);
    SupportSample s;
    s.u = u;
    s.value = pe.eigenvalues(pe.d() - 1);
    const auto top = pe.clusters.back();
    s.top_degenerate = (top.second - top.first) > 1;
    if (!s.top_degenerate) {
      s.point = expectation_tuple(a, pe.eigenvectors.col(pe.d() - 1), tol);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SingularSample> singular_set(const OperatorTuple& a,
                                         int resolution,
                                         const Tolerances& tol) {
  if (resolution < 1) {
    throw Error("singular_set: resolution must be positive");
  }
  std::vector<RealVector> dirs;
  if (a.n() == 2) {
    dirs = circle_directions(resolution);
  } else if (a.n() == 3) {
    dirs = fibonacci_half_sphere(resolution);
  } else {
    throw Error("singular_set: direction sampling implemented for n = 2 and "
                "n = 3, tuple has n = " +
                std::to_string(a.n()));
  }

  const std::vector<PencilEigen> pencils = decompose_all(a, dirs, tol);
  const double gap_floor = tol.singular_gap_rel * max_pencil_diameter(pencils);

  std::vector<SingularSample> out;
  for (const auto& pe : pencils) {
    for (int i = 0; i < pe.d(); ++i) {
      const double gap = pe.gap(i);
      if (!(gap > gap_floor)) {
        continue;  // near-degenerate branches are dropped, not extrapolated
      }
      SingularSample s;
      s.u = pe.xi;
      s.branch = i;
      s.gap = gap;
      s.a = expectation_tuple(a, pe.eigenvectors.col(i), tol);
      out.push_back(std::move(s));
    }
  }
  return out;
}

double singular_polynomial_value(const RealVector& a,
                                 SingularPolynomial which) {
  switch (which) {
    case SingularPolynomial::kDualCounterexample: {
      if (a.size() != 3) {
        throw DimensionMismatch(
            "singular_polynomial_value: surface polynomial needs a 3-vector");
      }
      const double a1 = a(0), a2 = a(1), a3 = a(2);
      return 4.0 * a3 * a3 *
                 (a1 * a1 - 2.0 * a1 * a3 + 5.0 * a3 * a3 + 2.0 * a1 -
                  6.0 * a3 + 1.0) +
             4.0 * a3 * (2.0 * a3 - a1 - 1.0) * a2 * a2 +
             a2 * a2 * a2 * a2;
    }
    case SingularPolynomial::kHeartQuartic: {
      if (a.size() != 2) {
        throw DimensionMismatch(
            "singular_polynomial_value: quartic curve needs a 2-vector");
      }
      const double a1 = a(0), a2 = a(1);
      const double a1sq = a1 * a1;
      const double a2sq = a2 * a2;
      return 4.0 * a1sq * a1 + 4.0 * a1sq * a1sq - 27.0 * a2sq -
             18.0 * a1 * a2sq + 13.0 * a1sq * a2sq + 32.0 * a2sq * a2sq;
    }
  }
  throw Error("singular_polynomial_value: unknown polynomial id");
}

double polynomial_residual(const std::vector<RealVector>& points,
                           SingularPolynomial which) {
  double worst = 0.0;
  for (const auto& p : points) {
    worst = std::max(worst, std::abs(singular_polynomial_value(p, which)));
  }
  return worst;
}

ConvexityReport strict_convexity_probe(const OperatorTuple& a,
                                       const std::vector<RealVector>& dirs,
                                       const Tolerances& tol) {
  if (dirs.empty()) {
    throw Error("strict_convexity_probe: need at least one direction");
  }
  if (a.d() < 2) {
    throw Error("strict_convexity_probe: needs dimension d >= 2");
  }
  const std::vector<PencilEigen> pencils = decompose_all(a, dirs, tol);
  ConvexityReport report;
  report.threshold = tol.singular_gap_rel * max_pencil_diameter(pencils);
  report.min_gap = std::numeric_limits<double>::infinity();
  for (const auto& pe : pencils) {
    const int d = pe.d();
    const double top_gap = pe.eigenvalues(d - 1) - pe.eigenvalues(d - 2);
    report.min_gap = std::min(report.min_gap, top_gap);
    if (top_gap < report.threshold) {
      report.flagged.push_back(pe.xi);
    }
  }
  return report;
}

EigenvalueCurves eigenvalue_curves(const OperatorTuple& pair,
                                   const std::vector<double>& t_samples,
                                   const Tolerances& tol) {
  if (pair.n() != 2) {
    throw DimensionMismatch("eigenvalue_curves: needs an operator pair, got " +
                            std::to_string(pair.n()) + " operators");
  }
  if (t_samples.empty()) {
    throw Error("eigenvalue_curves: need at least one parameter sample");
  }
  const int d = pair.d();
  const int cols = static_cast<int>(t_samples.size());

  EigenvalueCurves out;
  out.t = t_samples;
  out.curves.resize(d, cols);

  double prev_step = 0.0;
  for (int j = 0; j < cols; ++j) {
    RealVector u(2);
    u << std::cos(t_samples[j]), std::sin(t_samples[j]);
    const PencilEigen pe = pencil(pair, u, tol);
    out.curves.col(j) = pe.eigenvalues;

    // Branches are tracked in ascending order. Where the minimal gap dips
    // below either the degeneracy threshold or the largest inter-sample
    // motion, sorted order may silently swap true branches; flag the column
    // instead of guessing.
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < d; ++i) {
      min_gap = std::min(min_gap, pe.eigenvalues(i + 1) - pe.eigenvalues(i));
    }
    double step = 0.0;
    if (j > 0) {
      step = (out.curves.col(j) - out.curves.col(j - 1))
                 .cwiseAbs()
                 .maxCoeff();
    }
    const bool degenerate =
        std::any_of(pe.clusters.begin(), pe.clusters.end(),
                    [](const auto& c) { return c.second - c.first > 1; });
    const double motion = std::max(step, prev_step);
    if (degenerate || (d > 1 && min_gap < motion)) {
      out.ambiguous.push_back(j);
    }
    prev_step = step;
  }
  // A column's flag can come from the following step as well; rescan once so
  // the sample *before* a crossing is also marked.
  for (int j = 0; j + 1 < cols; ++j) {
    if (d < 2) {
      break;
    }
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < d; ++i) {
      min_gap = std::min(min_gap, out.curves(i + 1, j) - out.curves(i, j));
    }
    const double step =
        (out.curves.col(j + 1) - out.curves.col(j)).cwiseAbs().maxCoeff();
    if (min_gap < step &&
        !std::binary_search(out.ambiguous.begin(), out.ambiguous.end(), j)) {
      out.ambiguous.push_back(j);
    }
  }
  std::sort(out.ambiguous.begin(), out.ambiguous.end());
  out.ambiguous.erase(std::unique(out.ambiguous.begin(), out.ambiguous.end()),
                      out.ambiguous.end());
  return out;
}

RealVector reconstruct_from_curve(double c, double cdot, double t) {
  RealVector a(2);
  a << std::cos(t) * c - std::sin(t) * cdot,
      std::sin(t) * c + std::cos(t) * cdot;
  return a;
}

CurveReconstruction reconstruct_curve_points(const EigenvalueCurves& curves,
                                             int branch,
                                             bool skip_ambiguous) {
  const int d = static_cast<int>(curves.curves.rows());
  const int cols = static_cast<int>(curves.curves.cols());
  if (branch < 0 || branch >= d) {
    throw Error("reconstruct_curve_points: branch out of range");
  }
  if (cols < 3) {
    throw Error("reconstruct_curve_points: need at least three samples for "
                "central differences");
  }
  CurveReconstruction out;
  for (int j = 1; j + 1 < cols; ++j) {
    const bool flagged =
        std::binary_search(curves.ambiguous.begin(), curves.ambiguous.end(),
                           j - 1) ||
        std::binary_search(curves.ambiguous.begin(), curves.ambiguous.end(),
                           j) ||
        std::binary_search(curves.ambiguous.begin(), curves.ambiguous.end(),
                           j + 1);
    if (flagged) {
      if (skip_ambiguous) {
        continue;
      }
      throw DegenerateBranch(
          "reconstruct_curve_points: branch tracking ambiguous at t = " +
          std::to_string(curves.t[j]));
    }
    const double c = curves.curves(branch, j);
    const double cdot = (curves.curves(branch, j + 1) -
                         curves.curves(branch, j - 1)) /
                        (curves.t[j + 1] - curves.t[j - 1]);
    out.columns.push_back(j);
    out.points.push_back(reconstruct_from_curve(c, cdot, curves.t[j]));
  }
  return out;
}

EllipsePrediction nearly_commuting_ellipses(const OperatorTuple& pair) {
  if (pair.n() != 2) {
    throw DimensionMismatch(
        "nearly_commuting_ellipses: needs an operator pair");
  }
  const int d = pair.d();
  const Matrix& a1 = pair.op(0);
  const Matrix& a2 = pair.op(1);

  EllipsePrediction pred;
  for (int i = 0; i < d; ++i) {
    RealVector p(2);
    p << a1(i, i).real(), a2(i, i).real();
    pred.diagonal_points.push_back(std::move(p));
    for (int j = 0; j < d; ++j) {
      if (i != j) {
        pred.offdiag_max = std::max(
            {pred.offdiag_max, std::abs(a1(i, j)), std::abs(a2(i, j))});
      }
    }
  }

  // Each coordinate pair (i, j) contributes the singular set of the 2x2
  // compressions: the image of the Bloch circle under the affine map
  // v -> (beta_k + b_k . v), with b_k the Bloch vector of the traceless part.
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Eigen::Vector3d b[2];
      RealVector center(2);
      for (int k = 0; k < 2; ++k) {
        const Matrix& a = pair.op(k);
        const Complex diag_i = a(i, i);
        const Complex diag_j = a(j, j);
        const Complex off = a(i, j);
        center(k) = 0.5 * (diag_i + diag_j).real();
        b[k] << off.real(), -off.imag(), 0.5 * (diag_i - diag_j).real();
      }
      // Orthonormal basis of span{b1, b2}; absent directions give zero
      // columns (segment or point degenerations).
      const double scale = std::max({b[0].norm(), b[1].norm(), 1e-300});
      Eigen::Vector3d e1 = Eigen::Vector3d::Zero();
      Eigen::Vector3d e2 = Eigen::Vector3d::Zero();
      if (b[0].norm() > 1e-13 * scale) {
        e1 = b[0].normalized();
      } else if (b[1].norm() > 1e-13 * scale) {
        e1 = b[1].normalized();
      }
      Eigen::Vector3d rem = b[1] - b[1].dot(e1) * e1;
      if (rem.norm() > 1e-13 * scale) {
        e2 = rem.normalized();
      }
      Ellipse2D ell;
      ell.i = i;
      ell.j = j;
      ell.center = center;
      ell.axes.resize(2, 2);
      for (int k = 0; k < 2; ++k) {
        ell.axes(k, 0) = b[k].dot(e1);
        ell.axes(k, 1) = b[k].dot(e2);
      }
      pred.ellipses.push_back(std::move(ell));
    }
  }
  return pred;
}

double distance_to_prediction(const RealVector& point,
                              const EllipsePrediction& prediction,
                              int samples_per_ellipse) {
  if (point.size() != 2) {
    throw DimensionMismatch("distance_to_prediction: needs a 2-vector");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : prediction.diagonal_points) {
    best = std::min(best, (point - p).norm());
  }
  for (const auto& ell : prediction.ellipses) {
    for (int s = 0; s < samples_per_ellipse; ++s) {
      const double phi = 2.0 * kPi * s / samples_per_ellipse;
      RealVector q(2);
      q << std::cos(phi), std::sin(phi);
      best = std::min(best, (point - ell.center - ell.axes * q).norm());
    }
  }
  return best;
}

double hausdorff_to_prediction(const std::vector<SingularSample>& samples,
                               const EllipsePrediction& prediction,
                               int samples_per_ellipse) {
  double worst = 0.0;
  for (const auto& s : samples) {
    worst = std::max(
        worst, distance_to_prediction(s.a, prediction, samples_per_ellipse));
  }
  return worst;
}

bool inside_support_hull(const RealVector& a,
                         const std::vector<SupportSample>& support,
                         double slack) {
  for (const auto& s : support) {
    if (s.u.dot(a) > s.value + slack) {
      return false;
    }
  }
  return true;
}

}  // namespace qwig
