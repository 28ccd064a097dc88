#include "qwig/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

namespace qwig {

namespace {

// Iterate all multi-indices of the sample box in row-major order (last axis
// fastest), passing the multi-index and the flat index.
void for_each_cell(const std::vector<int>& samples,
                   const std::function<void(const std::vector<int>&,
                                            std::size_t)>& fn) {
  const int n = static_cast<int>(samples.size());
  std::vector<int> idx(n, 0);
  std::size_t flat = 0;
  while (true) {
    fn(idx, flat);
    ++flat;
    int axis = n - 1;
    while (axis >= 0) {
      if (++idx[axis] < samples[axis]) {
        break;
      }
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) {
      break;
    }
  }
}

// Signed FFT frequency integer for storage position m of an N-point axis:
// 0, 1, ..., N/2-1, -N/2, ..., -1.
int freq_int(int m, int n_samples) {
  return (m < (n_samples + 1) / 2) ? m : m - n_samples;
}

bool is_power_of_two(int x) { return x > 0 && (x & (x - 1)) == 0; }

}  // namespace

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int k = 0; k < n(); ++k) {
    v *= delta(k);
  }
  return v;
}

std::vector<double> GridSpec::centers(int axis) const {
  std::vector<double> out(samples[axis]);
  const double d = delta(axis);
  for (int i = 0; i < samples[axis]; ++i) {
    out[i] = lo(axis) + (i + 0.5) * d;
  }
  return out;
}

std::size_t GridSpec::total_cells() const {
  std::size_t total = 1;
  for (int s : samples) {
    total *= static_cast<std::size_t>(s);
  }
  return total;
}

double GridSpec::default_epsilon(const RealVector& lo, const RealVector& hi) {
  const double diameter = (hi - lo).norm();
  const double quarter = diameter / 4.0;
  return 1e-2 * quarter * quarter;
}

void GridSpec::validate() const {
  if (lo.size() != n() || hi.size() != n()) {
    throw DimensionMismatch("grid lo/hi/samples lengths disagree");
  }
  if (n() == 0) {
    throw DimensionMismatch("grid needs at least one axis");
  }
  if (n() > 4) {
    throw Error("grid dimension capped at 4 (memory growth)");
  }
  for (int k = 0; k < n(); ++k) {
    if (!(lo(k) < hi(k))) {
      throw Error("grid box must have lo < hi on every axis");
    }
    if (samples[k] < 8) {
      throw Error("grid needs at least 8 samples per axis");
    }
  }
  if (!(epsilon > 0.0)) {
    throw Error("grid epsilon must be positive");
  }
}

std::size_t WignerGrid::index(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (int k = 0; k < spec.n(); ++k) {
    flat = flat * static_cast<std::size_t>(spec.samples[k]) +
           static_cast<std::size_t>(idx[k]);
  }
  return flat;
}

double WignerGrid::total_mass() const {
  const double vol = spec.cell_volume();
  double mass = 0.0;
  for (double v : values) {
    mass += v;
  }
  return mass * vol;
}

double WignerGrid::peak() const {
  double p = 0.0;
  for (double v : values) {
    p = std::max(p, std::abs(v));
  }
  return p;
}

namespace {

// Shared implementation for the plain transform and the gradient transform.
// extra_factor(xi) multiplies the damped characteristic-function sample.
WignerGrid transform_impl(
    const OperatorTuple& a, const DensityMatrix& rho, const GridSpec& spec,
    int threads, const Tolerances& tol,
    const std::function<Complex(const RealVector&)>& extra_factor) {
  spec.validate();
  if (rho.d() != a.d()) {
    throw DimensionMismatch("state dimension does not match tuple");
  }
  const int n = spec.n();
  if (static_cast<int>(a.n()) != n) {
    throw DimensionMismatch("grid axis count must equal tuple length");
  }

  WignerGrid grid;
  grid.spec = spec;

  // --- diagnostics -------------------------------------------------------
  for (int k = 0; k < n; ++k) {
    if (!is_power_of_two(spec.samples[k])) {
      std::ostringstream os;
      os << "NonPowerOfTwoSamples: axis " << k << " has N = "
         << spec.samples[k];
      grid.warnings.push_back(os.str());
    }
  }
  {
    const double margin = 3.0 * std::sqrt(2.0 * spec.epsilon);
    for (int k = 0; k < n; ++k) {
      Eigen::SelfAdjointEigenSolver<Matrix> solver(a.op(k),
                                                   Eigen::EigenvaluesOnly);
      const double lo_k = solver.eigenvalues().minCoeff() - margin;
      const double hi_k = solver.eigenvalues().maxCoeff() + margin;
      if (lo_k < spec.lo(k) || hi_k > spec.hi(k)) {
        std::ostringstream os;
        os << "AliasingRisk: axis " << k << " support [" << lo_k << ", "
           << hi_k << "] exceeds box [" << spec.lo(k) << ", " << spec.hi(k)
           << "]";
        grid.warnings.push_back(os.str());
      }
    }
    double corner_sq = 0.0;
    for (int k = 0; k < n; ++k) {
      const double ximax = M_PI * spec.samples[k] / spec.length(k);
      corner_sq += ximax * ximax;
    }
    const double damping = std::exp(-spec.epsilon * corner_sq);
    if (damping > tol.damping_floor) {
      std::ostringstream os;
      os << "DampingShortfall: damping at dual-grid corner is " << damping
         << " (floor " << tol.damping_floor << ")";
      grid.warnings.push_back(os.str());
    }
  }

  // --- ray cache over primitive integer dual vectors ---------------------
  // Dual sample m has integer vector f, xi(f)_k = 2 pi f_k / L_k. Parallel
  // dual samples have parallel integer vectors, so one eigendecomposition
  // per primitive vector f / gcd serves the whole ray (homogeneity).
  const std::size_t total = spec.total_cells();
  std::vector<std::vector<int>> keys;
  std::map<std::vector<int>, std::size_t> key_slot;
  struct PointRef {
    std::size_t slot;
    double t;  // signed integer multiple of the primitive vector
  };
  std::vector<PointRef> refs(total);

  for_each_cell(spec.samples, [&](const std::vector<int>& idx,
                                  std::size_t flat) {
    std::vector<int> f(n);
    int gcd = 0;
    for (int k = 0; k < n; ++k) {
      f[k] = freq_int(idx[k], spec.samples[k]);
      gcd = std::gcd(gcd, std::abs(f[k]));
    }
    if (gcd == 0) {
      refs[flat] = {SIZE_MAX, 0.0};  // xi = 0: value is tr(rho) = 1
      return;
    }
    int sign = 1;
    for (int k = 0; k < n; ++k) {
      if (f[k] != 0) {
        sign = (f[k] > 0) ? 1 : -1;
        break;
      }
    }
    std::vector<int> g(n);
    for (int k = 0; k < n; ++k) {
      g[k] = sign * f[k] / gcd;
    }
    auto [it, inserted] = key_slot.try_emplace(std::move(g), keys.size());
    if (inserted) {
      keys.push_back(it->first);
    }
    refs[flat] = {it->second, static_cast<double>(sign * gcd)};
  });

  std::vector<std::optional<CharRay>> rays(keys.size());
  const auto build_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RealVector xi0(n);
      for (int k = 0; k < n; ++k) {
        xi0(k) = 2.0 * M_PI * keys[i][k] / spec.length(k);
      }
      rays[i].emplace(a, rho, xi0, tol);
    }
  };
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(keys.size())));
  if (workers == 1) {
    build_range(0, keys.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (keys.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(keys.size(), begin + chunk);
      if (begin < end) {
        pool.emplace_back(build_range, begin, end);
      }
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }

  // --- fill the damped, phase-shifted dual samples ------------------------
  std::vector<Complex> f_dual(total);
  RealVector center0 = spec.lo;
  for (int k = 0; k < n; ++k) {
    center0(k) += 0.5 * spec.delta(k);
  }
  for_each_cell(spec.samples, [&](const std::vector<int>& idx,
                                  std::size_t flat) {
    RealVector xi(n);
    for (int k = 0; k < n; ++k) {
      xi(k) = 2.0 * M_PI * freq_int(idx[k], spec.samples[k]) / spec.length(k);
    }
    const Complex charfn_value =
        (refs[flat].slot == SIZE_MAX)
            ? Complex(1.0, 0.0)
            : rays[refs[flat].slot]->eval(refs[flat].t);
    const double damping = std::exp(-spec.epsilon * xi.squaredNorm());
    const Complex phase = std::polar(1.0, -xi.dot(center0));
    f_dual[flat] = charfn_value * damping * phase * extra_factor(xi);
  });

  // --- inverse transform (forward DFT kernel e^{-2 pi i m j / N}) ---------
  std::vector<Complex> out(total);
  {
    std::vector<int> dims(spec.samples.begin(), spec.samples.end());
    fftw_plan plan = fftw_plan_dft(
        n, dims.data(), reinterpret_cast<fftw_complex*>(f_dual.data()),
        reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
        FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    if (plan == nullptr) {
      throw ConvergenceFailure("FFTW failed to create a plan");
    }
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }

  double box_volume = 1.0;
  for (int k = 0; k < n; ++k) {
    box_volume *= spec.length(k);
  }
  grid.values.resize(total);
  double max_imag = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    grid.values[i] = out[i].real() / box_volume;
    max_imag = std::max(max_imag, std::abs(out[i].imag()) / box_volume);
  }
  grid.residual_imag = max_imag;
  return grid;
}

}  // namespace

WignerGrid compute_wigner_grid(const OperatorTuple& a, const DensityMatrix& rho,
                               const GridSpec& spec, int threads,
                               const Tolerances& tol) {
  return transform_impl(a, rho, spec, threads, tol,
                        [](const RealVector&) { return Complex(1.0, 0.0); });
}

WignerGrid compute_wigner_gradient(const OperatorTuple& a,
                                   const DensityMatrix& rho,
                                   const GridSpec& spec, int axis, int threads,
                                   const Tolerances& tol) {
  if (axis < 0 || axis >= spec.n()) {
    throw DimensionMismatch("gradient axis out of range");
  }
  return transform_impl(a, rho, spec, threads, tol,
                        [axis](const RealVector& xi) {
                          return Complex(0.0, -xi(axis));
                        });
}

Marginal1D marginal_axis(const WignerGrid& grid, int axis) {
  const GridSpec& spec = grid.spec;
  if (axis < 0 || axis >= spec.n()) {
    throw DimensionMismatch("marginal axis out of range");
  }
  Marginal1D out;
  out.centers = spec.centers(axis);
  out.bin_width = spec.delta(axis);
  out.density.assign(spec.samples[axis], 0.0);
  const double perp_volume = spec.cell_volume() / spec.delta(axis);
  for_each_cell(spec.samples, [&](const std::vector<int>& idx,
                                  std::size_t flat) {
    out.density[idx[axis]] += grid.values[flat] * perp_volume;
  });
  return out;
}

Marginal1D marginal_direction(const WignerGrid& grid, const RealVector& u,
                              int bins) {
  const GridSpec& spec = grid.spec;
  if (u.size() != spec.n()) {
    throw DimensionMismatch("direction length does not match grid");
  }
  if (bins < 2) {
    throw Error("marginal needs at least 2 bins");
  }
  // Range of u.a over the box corners, padded by one bin so cloud-in-cell
  // splitting never clips.
  double t_lo = 0.0;
  double t_hi = 0.0;
  for (int k = 0; k < spec.n(); ++k) {
    const double a_pos = u(k) >= 0 ? spec.hi(k) : spec.lo(k);
    const double a_neg = u(k) >= 0 ? spec.lo(k) : spec.hi(k);
    t_hi += u(k) * a_pos;
    t_lo += u(k) * a_neg;
  }
  const double width = (t_hi - t_lo) / (bins - 2);
  t_lo -= width;

  Marginal1D out;
  out.bin_width = width;
  out.centers.resize(bins);
  out.density.assign(bins, 0.0);
  for (int b = 0; b < bins; ++b) {
    out.centers[b] = t_lo + (b + 0.5) * width;
  }
  const double cell_mass_factor = spec.cell_volume() / width;
  std::vector<std::vector<double>> centers(spec.n());
  for (int k = 0; k < spec.n(); ++k) {
    centers[k] = spec.centers(k);
  }
  for_each_cell(spec.samples, [&](const std::vector<int>& idx,
                                  std::size_t flat) {
    double t = 0.0;
    for (int k = 0; k < spec.n(); ++k) {
      t += u(k) * centers[k][idx[k]];
    }
    const double pos = (t - t_lo) / width - 0.5;
    const int b0 = static_cast<int>(std::floor(pos));
    const double frac = pos - b0;
    const double mass = grid.values[flat] * cell_mass_factor;
    if (b0 >= 0 && b0 < bins) {
      out.density[b0] += (1.0 - frac) * mass;
    }
    if (b0 + 1 >= 0 && b0 + 1 < bins) {
      out.density[b0 + 1] += frac * mass;
    }
  });
  return out;
}

double grid_moment(const WignerGrid& grid, const std::vector<int>& r) {
  const GridSpec& spec = grid.spec;
  if (static_cast<int>(r.size()) != spec.n()) {
    throw DimensionMismatch("moment multi-index length does not match grid");
  }
  int degree = 0;
  for (int rk : r) {
    if (rk < 0) {
      throw Error("moment multi-index must be nonnegative");
    }
    degree += rk;
  }
  if (degree > 8) {
    throw DegreeTooHigh("grid moments supported up to total degree 8");
  }
  std::vector<std::vector<double>> powers(spec.n());
  for (int k = 0; k < spec.n(); ++k) {
    const std::vector<double> c = spec.centers(k);
    powers[k].resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      powers[k][i] = std::pow(c[i], r[k]);
    }
  }
  double sum = 0.0;
  for_each_cell(spec.samples, [&](const std::vector<int>& idx,
                                  std::size_t flat) {
    double monomial = 1.0;
    for (int k = 0; k < spec.n(); ++k) {
      monomial *= powers[k][idx[k]];
    }
    sum += monomial * grid.values[flat];
  });
  return sum * spec.cell_volume();
}

double grid_moment_deconvolved(const WignerGrid& grid,
                               const std::vector<int>& r) {
  double value = grid_moment(grid, r);
  const int degree = std::accumulate(r.begin(), r.end(), 0);
  if (degree == 2) {
    // Pure second moments carry the smearing variance +2 eps; mixed second
    // moments are unbiased (independent Gaussian factors per axis).
    for (int rk : r) {
      if (rk == 2) {
        value -= 2.0 * grid.spec.epsilon;
      }
    }
  }
  return value;
}

NegativityReport negativity_report(const WignerGrid& grid) {
  NegativityReport report;
  report.min_value = std::numeric_limits<double>::infinity();
  double negative_sum = 0.0;
  for (double v : grid.values) {
    report.min_value = std::min(report.min_value, v);
    report.peak = std::max(report.peak, std::abs(v));
    if (v < 0) {
      negative_sum += v;
    }
  }
  report.negative_mass = negative_sum * grid.spec.cell_volume();
  return report;
}

double mass_outside_support(const WignerGrid& grid,
                            const std::vector<RealVector>& directions,
                            const std::vector<double>& support_values,
                            double margin) {
  if (directions.size() != support_values.size()) {
    throw DimensionMismatch("directions and support values differ in count");
  }
  const GridSpec& spec = grid.spec;
  std::vector<std::vector<double>> centers(spec.n());
  for (int k = 0; k < spec.n(); ++k) {
    centers[k] = spec.centers(k);
  }
  double outside = 0.0;
  double total = 0.0;
  for_each_cell(spec.samples, [&](const std::vector<int>& idx,
                                  std::size_t flat) {
    const double mass = std::abs(grid.values[flat]);
    total += mass;
    for (std::size_t i = 0; i < directions.size(); ++i) {
      double dot = 0.0;
      for (int k = 0; k < spec.n(); ++k) {
        dot += directions[i](k) * centers[k][idx[k]];
      }
      if (dot > support_values[i] + margin) {
        outside += mass;
        break;
      }
    }
  });
  return (total > 0) ? outside / total : 0.0;
}

double interpolate(const WignerGrid& grid, const RealVector& point) {
  const GridSpec& spec = grid.spec;
  if (point.size() != spec.n()) {
    throw DimensionMismatch("interpolation point length does not match grid");
  }
  const int n = spec.n();
  std::vector<int> base(n);
  std::vector<double> frac(n);
  for (int k = 0; k < n; ++k) {
    if (point(k) < spec.lo(k) || point(k) > spec.hi(k)) {
      throw Error("interpolation point outside grid box");
    }
    // Fractional position in units of cell centers.
    double x = (point(k) - spec.lo(k)) / spec.delta(k) - 0.5;
    x = std::clamp(x, 0.0, static_cast<double>(spec.samples[k] - 1));
    int i = static_cast<int>(std::floor(x));
    i = std::min(i, spec.samples[k] - 2);
    if (spec.samples[k] == 1) {
      i = 0;
    }
    base[k] = i;
    frac[k] = x - i;
  }
  double value = 0.0;
  const int corners = 1 << n;
  std::vector<int> idx(n);
  for (int c = 0; c < corners; ++c) {
    double weight = 1.0;
    for (int k = 0; k < n; ++k) {
      const int bit = (c >> k) & 1;
      idx[k] = std::min(base[k] + bit, spec.samples[k] - 1);
      weight *= bit ? frac[k] : (1.0 - frac[k]);
    }
    value += weight * grid.values[grid.index(idx)];
  }
  return value;
}

PushforwardComparison pushforward_compare(const WignerGrid& target,
                                          const WignerGrid& source,
                                          const RealMatrix& rotation,
                                          const RealVector& alpha) {
  const GridSpec& spec = target.spec;
  const int n = spec.n();
  if (rotation.rows() != n || rotation.cols() != n || alpha.size() != n) {
    throw DimensionMismatch("pushforward map dimensions do not match grid");
  }
  const RealMatrix inverse = rotation.fullPivLu().inverse();
  std::vector<std::vector<double>> centers(n);
  for (int k = 0; k < n; ++k) {
    centers[k] = spec.centers(k);
  }
  const double det = std::abs(rotation.determinant());
  PushforwardComparison cmp;
  std::size_t compared = 0;
  for_each_cell(spec.samples, [&](const std::vector<int>& idx,
                                  std::size_t flat) {
    RealVector a(n);
    for (int k = 0; k < n; ++k) {
      a(k) = centers[k][idx[k]];
    }
    const RealVector pre = inverse * (a - alpha);
    for (int k = 0; k < n; ++k) {
      // Stay a half-cell inside the source box: no extrapolation.
      if (pre(k) < source.spec.lo(k) + 0.5 * source.spec.delta(k) ||
          pre(k) > source.spec.hi(k) - 0.5 * source.spec.delta(k)) {
        return;
      }
    }
    const double predicted = interpolate(source, pre) / det;
    cmp.max_abs_diff =
        std::max(cmp.max_abs_diff, std::abs(target.values[flat] - predicted));
    ++compared;
  });
  cmp.compared_fraction =
      static_cast<double>(compared) / static_cast<double>(spec.total_cells());
  return cmp;
}

RadialProfile radial_profile(const WignerGrid& grid, const RealVector& center,
                             int bins, double rmax) {
  const GridSpec& spec = grid.spec;
  if (center.size() != spec.n()) {
    throw DimensionMismatch("radial center length does not match grid");
  }
  if (bins < 1 || !(rmax > 0)) {
    throw Error("radial profile needs bins >= 1 and rmax > 0");
  }
  RadialProfile profile;
  profile.centers.resize(bins);
  profile.averages.assign(bins, 0.0);
  profile.counts.assign(bins, 0);
  const double width = rmax / bins;
  for (int b = 0; b < bins; ++b) {
    profile.centers[b] = (b + 0.5) * width;
  }
  std::vector<std::vector<double>> centers(spec.n());
  for (int k = 0; k < spec.n(); ++k) {
    centers[k] = spec.centers(k);
  }
  for_each_cell(spec.samples, [&](const std::vector<int>& idx,
                                  std::size_t flat) {
    double r2 = 0.0;
    for (int k = 0; k < spec.n(); ++k) {
      const double z = centers[k][idx[k]] - center(k);
      r2 += z * z;
    }
    const double r = std::sqrt(r2);
    const int b = static_cast<int>(std::floor(r / width));
    if (b >= 0 && b < bins) {
      profile.averages[b] += grid.values[flat];
      profile.counts[b] += 1;
    }
  });
  for (int b = 0; b < bins; ++b) {
    if (profile.counts[b] > 0) {
      profile.averages[b] /= static_cast<double>(profile.counts[b]);
    }
  }
  return profile;
}

}  // namespace qwig
