#pragma once

#include <string>
#include <vector>

#include "qwig/charfn.hpp"
#include "qwig/operators.hpp"

namespace qwig {

// Sampling box for the regularized distribution. Cell j (multi-index) is
// centered at lo + (j + 1/2) * delta with delta = (hi - lo) / samples.
struct GridSpec {
  RealVector lo;
  RealVector hi;
  std::vector<int> samples;
  double epsilon = 0.0;

  int n() const { return static_cast<int>(samples.size()); }
  double delta(int axis) const {
    return (hi(axis) - lo(axis)) / samples[axis];
  }
  double length(int axis) const { return hi(axis) - lo(axis); }
  double cell_volume() const;
  std::vector<double> centers(int axis) const;
  std::size_t total_cells() const;

  // epsilon = 1e-2 * (box diameter / 4)^2 -- deterministic default tuned so
  // the smoothing scale is a few percent of the box.
  static double default_epsilon(const RealVector& lo, const RealVector& hi);

  // Throws on malformed boxes (lo >= hi, samples < 8, epsilon <= 0, n > 4).
  void validate() const;
};

// Regularized distribution sampled on the grid: values[j] ~ (W * G_eps)(a_j)
// where G_eps is the Gaussian whose Fourier transform is e^{-eps |xi|^2}
// (variance 2 eps per axis). Stored row-major, last axis fastest.
struct WignerGrid {
  GridSpec spec;
  std::vector<double> values;
  double residual_imag = 0.0;              // max |Im| discarded by the transform
  std::vector<std::string> warnings;       // aliasing / damping diagnostics

  std::size_t index(const std::vector<int>& idx) const;
  double total_mass() const;               // Riemann sum, should be 1
  double peak() const;                     // max |values|
};

// Compute the grid by sampling the damped characteristic function
// W^(xi) e^{-eps |xi|^2} on the dual FFT grid and transforming. One pencil
// eigendecomposition per primitive integer dual direction (all radial
// multiples reuse it). threads > 1 parallelizes the eigendecompositions;
// results are bit-identical for any thread count.
WignerGrid compute_wigner_grid(const OperatorTuple& a, const DensityMatrix& rho,
                               const GridSpec& spec, int threads = 1,
                               const Tolerances& tol = {});

// Same transform with an extra factor (-i xi_axis) per dual sample: returns
// the partial derivative d/da_axis of the regularized distribution.
WignerGrid compute_wigner_gradient(const OperatorTuple& a,
                                   const DensityMatrix& rho,
                                   const GridSpec& spec, int axis,
                                   int threads = 1, const Tolerances& tol = {});

// One-dimensional marginal distribution.
struct Marginal1D {
  std::vector<double> centers;  // bin centers along the chosen direction
  std::vector<double> density;  // probability density per unit length
  double bin_width = 0.0;
};

// Exact marginal along a coordinate axis (sum over the other axes).
Marginal1D marginal_axis(const WignerGrid& grid, int axis);

// Marginal along a general direction u: each cell's mass is deposited onto a
// 1-D grid of u.a values by linear (cloud-in-cell) splitting.
Marginal1D marginal_direction(const WignerGrid& grid, const RealVector& u,
                              int bins);

// Riemann-sum moment integral of a^r against the grid. Degrees above 8 are
// rejected; degrees above 4 are allowed but increasingly box-truncated.
double grid_moment(const WignerGrid& grid, const std::vector<int>& r);

// Moment with the Gaussian smearing bias removed analytically. Exact for
// total degree <= 2 (means are unbiased; each pure second moment carries
// +2 eps). Higher degrees are returned with the bias left in place.
double grid_moment_deconvolved(const WignerGrid& grid,
                               const std::vector<int>& r);

struct NegativityReport {
  double min_value = 0.0;
  double negative_mass = 0.0;  // Riemann sum of the negative part (<= 0)
  double peak = 0.0;
};

NegativityReport negativity_report(const WignerGrid& grid);

// Fraction of |mass| in cells lying outside the sampled support hull
// {a : u_i . a <= m_i + margin for all i}, given support samples (u_i, m_i).
double mass_outside_support(const WignerGrid& grid,
                            const std::vector<RealVector>& directions,
                            const std::vector<double>& support_values,
                            double margin);

// Multilinear interpolation of grid values at an arbitrary point (inside the
// box only; throws Error if out of range).
double interpolate(const WignerGrid& grid, const RealVector& point);

// Compare `target` against the pushforward of `source` under a -> R a + alpha,
// i.e. target(a) vs source(R^{-1}(a - alpha)) by multilinear interpolation.
// Cells whose preimage falls outside the source box are skipped.
struct PushforwardComparison {
  double max_abs_diff = 0.0;
  double compared_fraction = 0.0;  // cells compared / total cells
};

PushforwardComparison pushforward_compare(const WignerGrid& target,
                                          const WignerGrid& source,
                                          const RealMatrix& rotation,
                                          const RealVector& alpha);

// Radial profile around a center point: average of values over all cells in
// each radial bin [k, k+1) * (rmax / bins). Bins with no cells report 0.
struct RadialProfile {
  std::vector<double> centers;
  std::vector<double> averages;
  std::vector<std::size_t> counts;
};

RadialProfile radial_profile(const WignerGrid& grid, const RealVector& center,
                             int bins, double rmax);

}  // namespace qwig
