#pragma once

namespace qwig {

// Central numeric knobs. All comparisons across the toolkit go through one
// instance of this struct so the CLI can override them uniformly.
struct Tolerances {
  // Input validation (absolute).
  double hermiticity = 1e-9;  // max |M - M^*| entry allowed before rejection
  double trace = 1e-9;        // |tr(rho) - 1|
  double psd = 1e-9;          // eigenvalues of rho may dip this far below 0
  double normalized = 1e-9;   // | ||psi|| - 1 |

  // Eigen-decomposition post-conditions (absolute, matrices of O(1) norm).
  double eig_residual = 1e-10;

  // Relative gap below which eigenvalues are grouped into one cluster.
  double degeneracy_rel = 1e-8;

  // Relative gap below which a pencil branch is excluded from singular-set
  // sampling (branches must be cleanly non-degenerate).
  double singular_gap_rel = 1e-6;

  // Singular values below rank_rel * (largest singular value) count as zero
  // in Gram-matrix rank computations.
  double rank_rel = 1e-8;

  // Grid post-conditions.
  double normalization = 1e-3;  // |total mass - 1|
  double fft_reality = 1e-9;    // max |Im| relative to max |Re|

  // Damping required at the dual-grid corner before the transform is
  // considered truncation-free.
  double damping_floor = 1e-12;

  // Eigenvector-overlap threshold for the normally-ordered completeness test.
  double orthogonality = 1e-6;
};

}  // namespace qwig
