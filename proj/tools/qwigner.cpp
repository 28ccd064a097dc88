// qwigner: command-line front end for the quasi-probability toolkit.
//
// Exit codes: 0 success, 1 computation or check failure, 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwig/charfn.hpp"
#include "qwig/examples.hpp"
#include "qwig/geometry.hpp"
#include "qwig/grid.hpp"
#include "qwig/io.hpp"
#include "qwig/moments.hpp"
#include "qwig/operators.hpp"

namespace {

using namespace qwig;

std::uint64_t parse_seed(const std::string& text) {
  try {
    return std::stoull(text, nullptr, 0);  // base 0: decimal or 0x-prefixed
  } catch (const std::exception&) {
    throw CLI::ValidationError("--seed", "not a valid integer: " + text);
  }
}

RealVector parse_vector(const std::string& csv) {
  std::vector<double> parts;
  std::istringstream in(csv);
  std::string field;
  while (std::getline(in, field, ',')) {
    try {
      parts.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw Error("not a number in vector argument: '" + field + "'");
    }
  }
  if (parts.empty()) {
    throw Error("empty vector argument");
  }
  RealVector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = parts[i];
  }
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Options shared by every subcommand that reads a system.
struct SystemOpts {
  std::string input;
  std::string example;
  std::string seed_text = "0x57160";
  int threads = 1;
  Tolerances tol;

  std::uint64_t seed() const { return parse_seed(seed_text); }

  TupleDocument resolve() const {
    if (!input.empty() && !example.empty()) {
      throw Error("give either --input or --example, not both");
    }
    if (!input.empty()) {
      return load_tuple_json(input, tol);
    }
    if (!example.empty()) {
      NamedExample ex = make_example(example, seed());
      return TupleDocument{std::move(ex.tuple), std::move(ex.state)};
    }
    throw Error("no system given; use --input FILE or --example NAME");
  }
};

void add_system_options(CLI::App* cmd, SystemOpts& opts) {
  cmd->add_option("--input", opts.input,
                  "Matrix-tuple JSON file (fields n, d, operators, optional "
                  "state)");
  cmd->add_option("--example", opts.example,
                  "Catalog system name (see `qwigner example list`)");
  cmd->add_option("--seed", opts.seed_text,
                  "Seed for seeded constructions; decimal or 0x hex")
      ->capture_default_str();
  cmd->add_option("--threads", opts.threads, "Worker threads for grid jobs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--tol-hermiticity", opts.tol.hermiticity,
                  "Max allowed Hermiticity defect on input matrices");
  cmd->add_option("--tol-trace", opts.tol.trace,
                  "Max allowed |tr rho - 1| on input states");
  cmd->add_option("--tol-psd", opts.tol.psd,
                  "Max allowed negative state eigenvalue");
  cmd->add_option("--tol-degeneracy", opts.tol.degeneracy_rel,
                  "Relative eigenvalue clustering threshold");
}

// Options for subcommands that compute a grid.
struct GridOpts {
  double epsilon = 0.0;  // 0 = use the deterministic default
  std::vector<double> box;
  int samples = 64;

  GridSpec make_spec(const OperatorTuple& a) const {
    const int n = a.n();
    GridSpec spec;
    spec.lo.resize(n);
    spec.hi.resize(n);
    spec.samples.assign(n, samples);
    double auto_eps = 0.0;
    if (box.size() == 2) {
      for (int k = 0; k < n; ++k) {
        spec.lo(k) = box[0];
        spec.hi(k) = box[1];
      }
    } else if (box.size() == 2 * static_cast<std::size_t>(n)) {
      for (int k = 0; k < n; ++k) {
        spec.lo(k) = box[2 * k];
        spec.hi(k) = box[2 * k + 1];
      }
    } else if (box.empty()) {
      // Size the box to the spectral range plus three smoothing widths; the
      // epsilon used for the sizing is also the epsilon of the grid, so the
      // margin is consistent.
      double m = 0.0;
      for (int k = 0; k < n; ++k) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(a.op(k),
                                                 Eigen::EigenvaluesOnly);
        m = std::max(m, es.eigenvalues().cwiseAbs().maxCoeff());
      }
      auto_eps =
          epsilon > 0.0 ? epsilon : 1e-2 * (2.0 * m / 4.0) * (2.0 * m / 4.0);
      const double half = m + 3.0 * std::sqrt(2.0 * auto_eps) + 0.3;
      for (int k = 0; k < n; ++k) {
        spec.lo(k) = -half;
        spec.hi(k) = half;
      }
    } else {
      throw Error("--box needs 2 values (all axes) or 2 per axis");
    }
    if (epsilon > 0.0) {
      spec.epsilon = epsilon;
    } else if (auto_eps > 0.0) {
      spec.epsilon = auto_eps;
    } else {
      spec.epsilon = GridSpec::default_epsilon(spec.lo, spec.hi);
    }
    spec.validate();
    return spec;
  }
};

void add_grid_options(CLI::App* cmd, GridOpts& opts) {
  cmd->add_option("--epsilon", opts.epsilon,
                  "Regularization parameter (0 = automatic default)");
  cmd->add_option("--box", opts.box,
                  "Grid box: LO HI for all axes, or LO HI per axis")
      ->expected(-2);
  cmd->add_option("--samples", opts.samples, "Grid points per axis")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void print_warnings(const WignerGrid& grid) {
  for (const auto& w : grid.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
}

// ---------------------------------------------------------------------------
// Subcommand bodies. Each returns the process exit code.

int run_validate(const SystemOpts& sys) {
  const TupleDocument doc = sys.resolve();
  std::cout << "n\t" << doc.tuple.n() << "\n";
  std::cout << "d\t" << doc.tuple.d() << "\n";
  std::cout << "spectral_scale\t" << format_double(doc.tuple.spectral_scale())
            << "\n";
  double defect = 0.0;
  for (int k = 0; k < doc.tuple.n(); ++k) {
    defect = std::max(defect, hermiticity_defect(doc.tuple.op(k)));
  }
  std::cout << "hermiticity_defect\t" << format_double(defect) << "\n";
  std::cout << "state_trace\t"
            << format_double(doc.state.matrix().trace().real()) << "\n";
  Eigen::SelfAdjointEigenSolver<Matrix> es(doc.state.matrix(),
                                           Eigen::EigenvaluesOnly);
  std::cout << "state_min_eigenvalue\t"
            << format_double(es.eigenvalues().minCoeff()) << "\n";
  std::cout << "valid\n";
  return 0;
}

int run_charfn(const SystemOpts& sys, const std::string& xi_text) {
  const TupleDocument doc = sys.resolve();
  const RealVector xi = parse_vector(xi_text);
  const Complex value = char_function(doc.tuple, doc.state, xi, sys.tol);
  std::cout << format_double(value.real()) << "\t"
            << format_double(value.imag()) << "\n";
  return 0;
}

int run_wigner(const SystemOpts& sys, const GridOpts& gridopts,
               const std::string& out_csv, const std::string& out_pgm,
               int slice_axis, int slice_index) {
  const TupleDocument doc = sys.resolve();
  const GridSpec spec = gridopts.make_spec(doc.tuple);
  const WignerGrid grid =
      compute_wigner_grid(doc.tuple, doc.state, spec, sys.threads, sys.tol);
  print_warnings(grid);
  const NegativityReport neg = negativity_report(grid);
  std::cout << "epsilon\t" << format_double(spec.epsilon) << "\n";
  std::cout << "total_mass\t" << format_double(grid.total_mass()) << "\n";
  std::cout << "peak\t" << format_double(grid.peak()) << "\n";
  std::cout << "min_value\t" << format_double(neg.min_value) << "\n";
  std::cout << "negative_mass\t" << format_double(neg.negative_mass) << "\n";
  std::cout << "residual_imag\t" << format_double(grid.residual_imag) << "\n";
  if (!out_csv.empty()) {
    save_grid_csv(out_csv, grid);
  }
  if (!out_pgm.empty()) {
    if (grid.spec.n() == 2) {
      save_grid_pgm(out_pgm, grid);
    } else {
      const int axis = slice_axis >= 0 ? slice_axis : grid.spec.n() - 1;
      const int index =
          slice_index >= 0 ? slice_index : grid.spec.samples[axis] / 2;
      save_grid_pgm(out_pgm, grid, axis, index);
    }
  }
  return 0;
}

int run_marginal(const SystemOpts& sys, const GridOpts& gridopts,
                 const std::string& direction_text, int axis, int bins,
                 bool compare, const std::string& out_csv) {
  const TupleDocument doc = sys.resolve();
  const GridSpec spec = gridopts.make_spec(doc.tuple);
  const WignerGrid grid =
      compute_wigner_grid(doc.tuple, doc.state, spec, sys.threads, sys.tol);
  print_warnings(grid);

  Marginal1D marg;
  RealVector u;
  if (!direction_text.empty()) {
    u = parse_vector(direction_text);
    marg = marginal_direction(grid, u, bins);
  } else {
    if (axis < 0 || axis >= doc.tuple.n()) {
      throw Error("need --direction or a valid --axis");
    }
    u = RealVector::Zero(doc.tuple.n());
    u(axis) = 1.0;
    marg = marginal_axis(grid, axis);
  }

  std::ostringstream os;
  os << "center,density\n";
  for (std::size_t i = 0; i < marg.centers.size(); ++i) {
    os << format_double(marg.centers[i]) << ","
       << format_double(marg.density[i]) << "\n";
  }
  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    if (!out) {
      throw IoError("cannot open '" + out_csv + "'");
    }
    out << os.str();
  } else {
    std::cout << os.str();
  }

  if (compare) {
    // L1 distance against the exact smeared spectral measure, binned.
    std::vector<double> edges(marg.centers.size() + 1);
    for (std::size_t i = 0; i < marg.centers.size(); ++i) {
      edges[i] = marg.centers[i] - 0.5 * marg.bin_width;
    }
    edges.back() = marg.centers.back() + 0.5 * marg.bin_width;
    const std::vector<double> oracle = smeared_spectral_bin_masses(
        doc.tuple, doc.state, u, spec.epsilon, edges, sys.tol);
    double l1 = 0.0;
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      l1 += std::abs(marg.density[i] * marg.bin_width - oracle[i]);
    }
    std::cout << "l1_distance\t" << format_double(l1) << "\n";
  }
  return 0;
}

int run_jnr(const SystemOpts& sys, int resolution,
            const std::string& out_csv) {
  const TupleDocument doc = sys.resolve();
  const int n = doc.tuple.n();
  std::vector<RealVector> dirs;
  if (n == 2) {
    // Cover the full circle so the support function is sampled both ways.
    for (const auto& u : circle_directions(resolution)) {
      dirs.push_back(u);
      dirs.push_back(-u);
    }
  } else if (n == 3) {
    for (const auto& u : fibonacci_half_sphere(resolution)) {
      dirs.push_back(u);
      dirs.push_back(-u);
    }
  } else {
    throw Error("jnr: direction sampling implemented for n = 2 and n = 3");
  }
  const auto samples = jnr_boundary(doc.tuple, dirs, sys.tol);
  int degenerate = 0;
  std::ostringstream os;
  for (int k = 0; k < n; ++k) {
    os << "u" << k << ",";
  }
  os << "support";
  for (int k = 0; k < n; ++k) {
    os << ",a" << k;
  }
  os << ",top_degenerate\n";
  for (const auto& s : samples) {
    if (s.top_degenerate) {
      ++degenerate;
    }
    for (int k = 0; k < n; ++k) {
      os << format_double(s.u(k)) << ",";
    }
    os << format_double(s.value);
    for (int k = 0; k < n; ++k) {
      os << "," << (s.top_degenerate ? "nan" : format_double(s.point(k)));
    }
    os << "," << (s.top_degenerate ? 1 : 0) << "\n";
  }
  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    if (!out) {
      throw IoError("cannot open '" + out_csv + "'");
    }
    out << os.str();
  } else {
    std::cout << os.str();
  }
  std::cout << "directions\t" << samples.size() << "\n";
  std::cout << "degenerate_top\t" << degenerate << "\n";
  return 0;
}

int run_sing(const SystemOpts& sys, int resolution,
             const std::string& residual, const std::string& out_csv) {
  const TupleDocument doc = sys.resolve();
  const auto samples = singular_set(doc.tuple, resolution, sys.tol);
  if (!out_csv.empty()) {
    save_singular_csv(out_csv, samples);
  }
  std::cout << "samples\t" << samples.size() << "\n";
  if (!residual.empty() && residual != "none") {
    SingularPolynomial which;
    if (residual == "gpoly") {
      which = SingularPolynomial::kDualCounterexample;
    } else if (residual == "heart-quartic") {
      which = SingularPolynomial::kHeartQuartic;
    } else {
      throw Error("unknown --residual '" + residual +
                  "' (use gpoly, heart-quartic, or none)");
    }
    std::vector<RealVector> points;
    points.reserve(samples.size());
    for (const auto& s : samples) {
      points.push_back(s.a);
    }
    std::cout << "max_residual\t"
              << format_double(polynomial_residual(points, which)) << "\n";
  }
  return 0;
}

int run_curves(const SystemOpts& sys, int count, const std::string& out_csv) {
  const TupleDocument doc = sys.resolve();
  std::vector<double> ts(count);
  for (int i = 0; i < count; ++i) {
    ts[i] = 2.0 * M_PI * i / count;
  }
  const EigenvalueCurves curves = eigenvalue_curves(doc.tuple, ts, sys.tol);
  std::ostringstream os;
  os << "t";
  for (int b = 0; b < curves.curves.rows(); ++b) {
    os << ",c" << b;
  }
  os << ",ambiguous\n";
  std::size_t amb = 0;
  for (int j = 0; j < curves.curves.cols(); ++j) {
    os << format_double(curves.t[j]);
    for (int b = 0; b < curves.curves.rows(); ++b) {
      os << "," << format_double(curves.curves(b, j));
    }
    const bool flagged = amb < curves.ambiguous.size() &&
                         curves.ambiguous[amb] == j;
    if (flagged) {
      ++amb;
    }
    os << "," << (flagged ? 1 : 0) << "\n";
  }
  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    if (!out) {
      throw IoError("cannot open '" + out_csv + "'");
    }
    out << os.str();
  } else {
    std::cout << os.str();
  }
  std::cout << "ambiguous_columns\t" << curves.ambiguous.size() << "\n";
  return 0;
}

int run_ellipses(const SystemOpts& sys, int resolution) {
  const TupleDocument doc = sys.resolve();
  const EllipsePrediction pred = nearly_commuting_ellipses(doc.tuple);
  const auto samples = singular_set(doc.tuple, resolution, sys.tol);
  std::cout << "offdiag_max\t" << format_double(pred.offdiag_max) << "\n";
  std::cout << "ellipses\t" << pred.ellipses.size() << "\n";
  for (const auto& e : pred.ellipses) {
    std::cout << "ellipse\t" << e.i << "," << e.j << "\tcenter\t"
              << format_double(e.center(0)) << "," << format_double(e.center(1))
              << "\taxes\t" << format_double(e.axes(0, 0)) << ","
              << format_double(e.axes(0, 1)) << ","
              << format_double(e.axes(1, 0)) << ","
              << format_double(e.axes(1, 1)) << "\n";
  }
  std::cout << "hausdorff\t"
            << format_double(hausdorff_to_prediction(samples, pred)) << "\n";
  return 0;
}

int run_moments(const SystemOpts& sys, const std::string& index_text,
                int degree) {
  const TupleDocument doc = sys.resolve();
  if (!index_text.empty()) {
    const RealVector rv = parse_vector(index_text);
    MultiIndex r(rv.size());
    for (Eigen::Index i = 0; i < rv.size(); ++i) {
      r[static_cast<std::size_t>(i)] = static_cast<int>(rv(i));
    }
    const Matrix m = weyl_moment(doc.tuple, r);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        std::cout << format_double(m(i, j).real()) << (m(i, j).imag() >= 0
                                                           ? "+"
                                                           : "")
                  << format_double(m(i, j).imag()) << "i"
                  << (j + 1 < m.cols() ? "\t" : "\n");
      }
    }
    return 0;
  }
  Rng rng(sys.seed());
  RealVector xi(doc.tuple.n());
  for (int k = 0; k < doc.tuple.n(); ++k) {
    xi(k) = rng.normal();
  }
  std::cout << "multinomial_residual\t"
            << format_double(check_multinomial(doc.tuple, xi, degree)) << "\n";
  if (doc.tuple.n() == 2) {
    std::cout << "commutator_orthogonality\t"
              << format_double(commutator_orthogonality(doc.tuple, degree))
              << "\n";
  }
  return 0;
}

int run_infocomp(const SystemOpts& sys, int degree_cap) {
  const TupleDocument doc = sys.resolve();
  const SpanDimension span =
      weyl_span_dimension(doc.tuple, degree_cap, sys.tol);
  std::cout << "dimension\t" << span.dimension << "\n";
  std::cout << "degree_reached\t" << span.degree_reached << "\n";
  std::cout << "rank_history";
  for (int r : span.rank_history) {
    std::cout << "\t" << r;
  }
  std::cout << "\n";
  const int full = doc.tuple.d() * doc.tuple.d();
  std::cout << "complete\t" << (span.dimension == full ? "yes" : "no") << "\n";
  return 0;
}

int run_normal_complete(const SystemOpts& sys) {
  const TupleDocument doc = sys.resolve();
  if (doc.tuple.n() != 2) {
    throw Error("normal-complete: needs an operator pair");
  }
  const NormalCompleteness nc =
      normal_complete(doc.tuple.op(0), doc.tuple.op(1), sys.tol);
  std::cout << "complete\t" << (nc.complete ? "yes" : "no") << "\n";
  std::cout << "min_overlap\t" << format_double(nc.min_overlap) << "\n";
  std::cout << "witness\t" << nc.witness_i << "\t" << nc.witness_j << "\n";
  return 0;
}

int run_bmv(const SystemOpts& sys, int pairs, int degree_cap,
            bool counterexample_only) {
  std::cout << "triple_counterexample\t"
            << format_double(bmv_triple_counterexample()) << "\n";
  if (counterexample_only) {
    return 0;
  }
  Rng rng(sys.seed());
  double worst = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < pairs; ++trial) {
    const Matrix a = random_psd(3, rng);
    const Matrix b = random_psd(3, rng);
    for (int n = 0; n <= degree_cap; ++n) {
      for (int m = 0; n + m <= degree_cap; ++m) {
        worst = std::min(worst, bmv_mixed_moment(a, b, n, m, sys.tol));
      }
    }
  }
  std::cout << "pairs\t" << pairs << "\n";
  std::cout << "min_mixed_moment\t" << format_double(worst) << "\n";
  return worst >= -1e-10 ? 0 : 1;
}

int run_symmetry(const SystemOpts& sys, int p) {
  const NamedExample ex = dihedral_multiplet(p, sys.seed());
  const Matrix shift = dihedral_shift(p);
  const Matrix refl = dihedral_reflection(p);
  const Matrix& a1 = ex.tuple.op(0);
  const Matrix& a2 = ex.tuple.op(1);
  const double theta = 2.0 * M_PI / p;
  const double rot_defect = std::max(
      (shift.adjoint() * a1 * shift -
       (std::cos(theta) * a1 + std::sin(theta) * a2))
          .cwiseAbs()
          .maxCoeff(),
      (shift.adjoint() * a2 * shift -
       (-std::sin(theta) * a1 + std::cos(theta) * a2))
          .cwiseAbs()
          .maxCoeff());
  const double refl_defect =
      std::max((refl.adjoint() * a1 * refl + a1).cwiseAbs().maxCoeff(),
               (refl.adjoint() * a2 * refl - a2).cwiseAbs().maxCoeff());
  std::cout << "p\t" << p << "\n";
  std::cout << "rotation_defect\t" << format_double(rot_defect) << "\n";
  std::cout << "reflection_defect\t" << format_double(refl_defect) << "\n";
  std::cout << "twirl_rank\t" << dihedral_twirl_rank(p) << "\n";
  std::cout << "twirl_idempotence_defect\t"
            << format_double(dihedral_twirl_idempotence_defect(p)) << "\n";
  const double fix_defect =
      std::max((dihedral_twirl(a1) - a1).cwiseAbs().maxCoeff(),
               (dihedral_twirl(a2) - a2).cwiseAbs().maxCoeff());
  std::cout << "twirl_fixes_multiplet\t" << format_double(fix_defect) << "\n";
  return 0;
}

int run_example(const std::string& verb, const std::string& name,
                const SystemOpts& sys, const std::string& out) {
  if (verb == "list") {
    for (const auto& n : example_names()) {
      std::cout << n << "\n";
    }
    return 0;
  }
  if (verb == "dump") {
    if (name.empty()) {
      throw Error("example dump: needs a catalog name");
    }
    const NamedExample ex = make_example(name, sys.seed());
    const std::string text = dump_tuple_json(ex.tuple, ex.state);
    if (out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out);
      if (!f) {
        throw IoError("cannot open '" + out + "'");
      }
      f << text;
    }
    return 0;
  }
  throw Error("example: unknown verb '" + verb + "' (use list or dump)");
}

// ---------------------------------------------------------------------------
// `check`: the invariant suite as a TSV report.

void check_core(const TupleDocument& doc, const Tolerances& tol,
                CheckReport& report) {
  double defect = 0.0;
  for (int k = 0; k < doc.tuple.n(); ++k) {
    defect = std::max(defect, hermiticity_defect(doc.tuple.op(k)));
  }
  report.add("core.hermiticity_defect", defect, tol.hermiticity, true);
  report.add("core.state_trace_defect",
             std::abs(doc.state.matrix().trace().real() - 1.0), tol.trace,
             std::abs(doc.state.matrix().trace().real() - 1.0) <= tol.trace);
  Eigen::SelfAdjointEigenSolver<Matrix> es(doc.state.matrix(),
                                           Eigen::EigenvaluesOnly);
  const double lam = es.eigenvalues().minCoeff();
  report.add("core.state_min_eigenvalue", lam, -tol.psd, lam >= -tol.psd);
}

void check_charfn(const TupleDocument& doc, std::uint64_t seed,
                  const Tolerances& tol, CheckReport& report) {
  Rng rng(seed);
  const int n = doc.tuple.n();
  const Complex at_zero =
      char_function(doc.tuple, doc.state, RealVector::Zero(n), tol);
  report.add_bound("charfn.value_at_zero_minus_1", std::abs(at_zero - 1.0),
                   1e-12);
  double conj_defect = 0.0;
  double modulus_excess = 0.0;
  double ray_defect = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    RealVector xi(n);
    for (int k = 0; k < n; ++k) {
      xi(k) = 2.0 * rng.normal();
    }
    const Complex plus = char_function(doc.tuple, doc.state, xi, tol);
    const Complex minus = char_function(doc.tuple, doc.state, -xi, tol);
    conj_defect = std::max(conj_defect, std::abs(plus - std::conj(minus)));
    modulus_excess = std::max(modulus_excess, std::abs(plus) - 1.0);
    const CharRay ray(doc.tuple, doc.state, xi, tol);
    for (double t : {-1.5, 0.25, 1.0, 3.0}) {
      const Complex direct =
          char_function(doc.tuple, doc.state, (t * xi).eval(), tol);
      ray_defect = std::max(ray_defect, std::abs(direct - ray.eval(t)));
    }
  }
  report.add_bound("charfn.conjugate_symmetry", conj_defect, 1e-12);
  report.add("charfn.modulus_bound_excess", modulus_excess, 1e-12,
             modulus_excess <= 1e-12);
  report.add_bound("charfn.ray_consistency", ray_defect, 1e-11);
}

void check_grid(const TupleDocument& doc, int threads, const Tolerances& tol,
                CheckReport& report) {
  const int n = doc.tuple.n();
  if (n > 3) {
    return;  // grid checks are n <= 3 (cost)
  }
  GridOpts gridopts;
  gridopts.epsilon = 0.01;
  gridopts.samples = n == 3 ? 80 : 128;
  const GridSpec spec = gridopts.make_spec(doc.tuple);
  const WignerGrid grid =
      compute_wigner_grid(doc.tuple, doc.state, spec, threads, tol);
  report.add_bound("grid.total_mass_minus_1",
                   std::abs(grid.total_mass() - 1.0), tol.normalization);
  report.add_bound("grid.residual_imag_rel",
                   grid.peak() > 0 ? grid.residual_imag / grid.peak() : 0.0,
                   tol.fft_reality);
  for (int k = 0; k < n; ++k) {
    MultiIndex r(n, 0);
    r[k] = 1;
    const double mean = grid_moment(grid, r);
    const double expect =
        (doc.state.matrix() * doc.tuple.op(k)).trace().real();
    report.add_bound("grid.mean_axis" + std::to_string(k) + "_defect",
                     mean - expect, 1e-2);
  }
  if (n == 2 || n == 3) {
    const auto dirs =
        n == 2 ? circle_directions(64) : fibonacci_half_sphere(256);
    std::vector<RealVector> both;
    for (const auto& u : dirs) {
      both.push_back(u);
      both.push_back(-u);
    }
    const auto support = jnr_boundary(doc.tuple, both, tol);
    std::vector<RealVector> us;
    std::vector<double> ms;
    for (const auto& s : support) {
      us.push_back(s.u);
      ms.push_back(s.value);
    }
    // 4.5 smoothing widths: the one-sided Gaussian tail at 3 sigma is
    // already 1.35e-3 per boundary-normal direction, so a 1e-3 bound on
    // boundary-concentrated mass needs the wider dilation (4.5 sigma tail
    // ~ 3e-5).
    const double margin = 4.5 * std::sqrt(2.0 * spec.epsilon);
    const double outside = mass_outside_support(grid, us, ms, margin);
    report.add_bound("grid.mass_outside_support", outside, 1e-3);
  }
}

void check_moments(const TupleDocument& doc, std::uint64_t seed,
                   const Tolerances& tol, CheckReport& report) {
  Rng rng(seed);
  RealVector xi(doc.tuple.n());
  for (int k = 0; k < doc.tuple.n(); ++k) {
    xi(k) = rng.normal();
  }
  const int degree = 4;
  const double norm = std::pow(doc.tuple.combine(xi).operatorNorm(),
                               static_cast<double>(degree));
  report.add_bound("moments.multinomial_residual_rel",
                   check_multinomial(doc.tuple, xi, degree) /
                       std::max(norm, 1e-300),
                   1e-9);
  if (doc.tuple.n() == 2) {
    const double scale = std::pow(std::max(doc.tuple.spectral_scale(), 1.0),
                                  static_cast<double>(degree + 2));
    report.add_bound("moments.commutator_orthogonality_rel",
                     commutator_orthogonality(doc.tuple, degree) / scale,
                     1e-9);
  }
  const SpanDimension span = weyl_span_dimension(doc.tuple, -1, tol);
  const int full = doc.tuple.d() * doc.tuple.d();
  report.add("moments.span_dimension", span.dimension, full,
             span.dimension <= full);
}

void check_geometry(const TupleDocument& doc, const Tolerances& tol,
                    CheckReport& report) {
  const int n = doc.tuple.n();
  if (n != 2 && n != 3) {
    return;
  }
  const int resolution = n == 2 ? 128 : 300;
  const auto samples = singular_set(doc.tuple, resolution, tol);
  std::vector<RealVector> dirs;
  const auto base =
      n == 2 ? circle_directions(resolution) : fibonacci_half_sphere(resolution);
  for (const auto& u : base) {
    dirs.push_back(u);
    dirs.push_back(-u);
  }
  const auto support = jnr_boundary(doc.tuple, dirs, tol);
  bool all_inside = true;
  for (const auto& s : samples) {
    if (!inside_support_hull(s.a, support, 1e-8)) {
      all_inside = false;
      break;
    }
  }
  report.add("geometry.singular_inside_hull", all_inside ? 1.0 : 0.0, 1.0,
             all_inside);
  // Antipodal consistency at a few directions: branch mu at u matches branch
  // d-1-mu at -u.
  double antipode_defect = 0.0;
  for (int probe = 0; probe < 5; ++probe) {
    const RealVector& u = base[probe * base.size() / 5];
    const PencilEigen fwd = pencil(doc.tuple, u, tol);
    const PencilEigen bwd = pencil(doc.tuple, (-u).eval(), tol);
    for (int i = 0; i < fwd.d(); ++i) {
      if (fwd.gap(i) < tol.singular_gap_rel * fwd.diameter()) {
        continue;
      }
      const RealVector a_fwd =
          expectation_tuple(doc.tuple, fwd.eigenvectors.col(i), tol);
      const RealVector a_bwd = expectation_tuple(
          doc.tuple, bwd.eigenvectors.col(fwd.d() - 1 - i), tol);
      antipode_defect =
          std::max(antipode_defect, (a_fwd - a_bwd).norm());
    }
  }
  report.add_bound("geometry.antipodal_consistency", antipode_defect, 1e-9);
}

int run_check(const SystemOpts& sys, const std::string& what,
              const std::string& out) {
  const TupleDocument doc = sys.resolve();
  CheckReport report;
  const bool all = what == "all";
  if (all || what == "core") {
    check_core(doc, sys.tol, report);
  }
  if (all || what == "charfn") {
    check_charfn(doc, sys.seed(), sys.tol, report);
  }
  if (all || what == "grid") {
    check_grid(doc, sys.threads, sys.tol, report);
  }
  if (all || what == "moments") {
    check_moments(doc, sys.seed(), sys.tol, report);
  }
  if (all || what == "geometry") {
    check_geometry(doc, sys.tol, report);
  }
  if (report.size() == 0) {
    throw Error("check: unknown group '" + what +
                "' (use all, core, charfn, grid, moments, or geometry)");
  }
  const std::string tsv = report.to_tsv();
  std::cout << tsv;
  if (!out.empty()) {
    report.save(out);
  }
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qwigner: quasi-probability distributions for tuples of Hermitian "
      "matrices.\nComputes characteristic functions, regularized "
      "distribution grids, marginals,\nsymmetrized moments, numerical-range "
      "geometry, and the associated checks."};
  app.require_subcommand(1);

  // validate
  SystemOpts validate_sys;
  auto* cmd_validate = app.add_subcommand(
      "validate", "Validate an operator tuple + state and print a summary");
  add_system_options(cmd_validate, validate_sys);

  // charfn
  SystemOpts charfn_sys;
  std::string charfn_xi;
  auto* cmd_charfn = app.add_subcommand(
      "charfn",
      "Evaluate the characteristic function tr(rho e^{i xi.A}) at one xi");
  add_system_options(cmd_charfn, charfn_sys);
  cmd_charfn->add_option("--xi", charfn_xi, "Evaluation point, comma-separated")
      ->required();

  // wigner
  SystemOpts wigner_sys;
  GridOpts wigner_grid;
  std::string wigner_csv, wigner_pgm;
  int wigner_slice_axis = -1, wigner_slice_index = -1;
  auto* cmd_wigner = app.add_subcommand(
      "wigner",
      "Compute the regularized distribution on a grid; emit CSV and/or PGM");
  add_system_options(cmd_wigner, wigner_sys);
  add_grid_options(cmd_wigner, wigner_grid);
  cmd_wigner->add_option("--out", wigner_csv, "Grid CSV output path");
  cmd_wigner->add_option("--image", wigner_pgm, "PGM image output path");
  cmd_wigner->add_option("--slice-axis", wigner_slice_axis,
                         "Axis to fix for image slices of 3-D grids");
  cmd_wigner->add_option("--slice-index", wigner_slice_index,
                         "Sample index along the slice axis");

  // marginal
  SystemOpts marginal_sys;
  GridOpts marginal_grid;
  std::string marginal_dir, marginal_csv;
  int marginal_axis_opt = -1, marginal_bins = 128;
  bool marginal_compare = false;
  auto* cmd_marginal = app.add_subcommand(
      "marginal",
      "Marginal of the grid along an axis or a general direction");
  add_system_options(cmd_marginal, marginal_sys);
  add_grid_options(cmd_marginal, marginal_grid);
  cmd_marginal->add_option("--direction", marginal_dir,
                           "Direction vector, comma-separated");
  cmd_marginal->add_option("--axis", marginal_axis_opt,
                           "Coordinate axis index (alternative to "
                           "--direction)");
  cmd_marginal->add_option("--bins", marginal_bins,
                           "Bins for direction marginals")
      ->capture_default_str();
  cmd_marginal->add_flag("--compare", marginal_compare,
                         "Also print the L1 distance to the exact smeared "
                         "spectral measure");
  cmd_marginal->add_option("--out", marginal_csv, "CSV output path");

  // jnr
  SystemOpts jnr_sys;
  int jnr_resolution = 200;
  std::string jnr_csv;
  auto* cmd_jnr = app.add_subcommand(
      "jnr",
      "Sample the support function and boundary of the joint numerical "
      "range");
  add_system_options(cmd_jnr, jnr_sys);
  cmd_jnr->add_option("--resolution", jnr_resolution, "Direction count")
      ->capture_default_str();
  cmd_jnr->add_option("--out", jnr_csv, "CSV output path");

  // sing
  SystemOpts sing_sys;
  int sing_resolution = 200;
  std::string sing_residual = "none", sing_csv;
  auto* cmd_sing = app.add_subcommand(
      "sing", "Sample the singular set over quasi-uniform directions");
  add_system_options(cmd_sing, sing_sys);
  cmd_sing->add_option("--resolution", sing_resolution, "Direction count")
      ->capture_default_str();
  cmd_sing->add_option("--residual", sing_residual,
                       "Polynomial residual to report: gpoly, heart-quartic, "
                       "or none")
      ->capture_default_str();
  cmd_sing->add_option("--out", sing_csv, "Point-cloud CSV output path");

  // curves
  SystemOpts curves_sys;
  int curves_samples = 512;
  std::string curves_csv;
  auto* cmd_curves = app.add_subcommand(
      "curves",
      "Eigenvalue curves of A1 cos t + A2 sin t with ambiguity flags");
  add_system_options(cmd_curves, curves_sys);
  cmd_curves
      ->add_option("--t-samples", curves_samples, "Parameter sample count")
      ->capture_default_str();
  cmd_curves->add_option("--out", curves_csv, "CSV output path");

  // ellipses
  SystemOpts ellipses_sys;
  int ellipses_resolution = 400;
  auto* cmd_ellipses = app.add_subcommand(
      "ellipses",
      "Compression-ellipse prediction for nearly commuting pairs plus the "
      "one-sided Hausdorff distance of the sampled singular set");
  add_system_options(cmd_ellipses, ellipses_sys);
  cmd_ellipses
      ->add_option("--resolution", ellipses_resolution,
                   "Singular-set direction count")
      ->capture_default_str();

  // moments
  SystemOpts moments_sys;
  std::string moments_index;
  int moments_degree = 4;
  auto* cmd_moments = app.add_subcommand(
      "moments",
      "Symmetrized operator moments: print one moment or run the "
      "multinomial/orthogonality residual checks");
  add_system_options(cmd_moments, moments_sys);
  cmd_moments->add_option("--index", moments_index,
                          "Exponent vector of the moment, comma-separated");
  cmd_moments->add_option("--degree", moments_degree,
                          "Degree for the residual checks")
      ->capture_default_str();

  // infocomp
  SystemOpts infocomp_sys;
  int infocomp_cap = -1;
  auto* cmd_infocomp = app.add_subcommand(
      "infocomp",
      "Real span dimension of the symmetrized moments "
      "(informational completeness when it reaches d^2)");
  add_system_options(cmd_infocomp, infocomp_sys);
  cmd_infocomp
      ->add_option("--degree-cap", infocomp_cap,
                   "Highest moment degree (-1 = grow until saturation)")
      ->capture_default_str();

  // normal-complete
  SystemOpts nc_sys;
  auto* cmd_nc = app.add_subcommand(
      "normal-complete",
      "Eigenbasis-overlap completeness test for normally ordered moments of "
      "a pair");
  add_system_options(cmd_nc, nc_sys);

  // bmv
  SystemOpts bmv_sys;
  int bmv_pairs = 50, bmv_cap = 10;
  bool bmv_counter_only = false;
  auto* cmd_bmv = app.add_subcommand(
      "bmv",
      "Mixed-moment positivity survey for seeded positive semidefinite "
      "pairs, plus the three-operator counterexample value");
  add_system_options(cmd_bmv, bmv_sys);
  cmd_bmv->add_option("--pairs", bmv_pairs, "Seeded pair count")
      ->capture_default_str();
  cmd_bmv->add_option("--degree-cap", bmv_cap, "Max n+m")
      ->capture_default_str();
  cmd_bmv->add_flag("--counterexample-only", bmv_counter_only,
                    "Only print the three-operator counterexample value");

  // symmetry
  SystemOpts symmetry_sys;
  int symmetry_p = 5;
  auto* cmd_symmetry = app.add_subcommand(
      "symmetry",
      "Dihedral multiplet diagnostics: transformation defects, twirl rank, "
      "idempotence");
  add_system_options(cmd_symmetry, symmetry_sys);
  cmd_symmetry->add_option("--p", symmetry_p, "Dihedral order (p > 2)")
      ->capture_default_str();

  // example
  SystemOpts example_sys;
  std::string example_verb, example_name, example_out;
  auto* cmd_example = app.add_subcommand(
      "example", "Catalog access: `example list` or `example dump NAME`");
  cmd_example->add_option("verb", example_verb, "list or dump")->required();
  cmd_example->add_option("name", example_name, "Catalog name (for dump)");
  cmd_example->add_option("--out", example_out, "Write JSON here instead of "
                                                "stdout");
  cmd_example->add_option("--seed", example_sys.seed_text,
                          "Seed for seeded catalog entries")
      ->capture_default_str();

  // check
  SystemOpts check_sys;
  std::string check_what = "all", check_out;
  auto* cmd_check = app.add_subcommand(
      "check",
      "Run the invariant suite on a system; TSV report with a final "
      "PASS/FAIL line");
  cmd_check->add_option("what", check_what,
                        "Check group: all, core, charfn, grid, moments, "
                        "geometry")
      ->capture_default_str();
  add_system_options(cmd_check, check_sys);
  cmd_check->add_option("--out", check_out, "Also write the TSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cmd_validate) {
      return run_validate(validate_sys);
    }
    if (*cmd_charfn) {
      return run_charfn(charfn_sys, charfn_xi);
    }
    if (*cmd_wigner) {
      return run_wigner(wigner_sys, wigner_grid, wigner_csv, wigner_pgm,
                        wigner_slice_axis, wigner_slice_index);
    }
    if (*cmd_marginal) {
      return run_marginal(marginal_sys, marginal_grid, marginal_dir,
                          marginal_axis_opt, marginal_bins, marginal_compare,
                          marginal_csv);
    }
    if (*cmd_jnr) {
      return run_jnr(jnr_sys, jnr_resolution, jnr_csv);
    }
    if (*cmd_sing) {
      return run_sing(sing_sys, sing_resolution, sing_residual, sing_csv);
    }
    if (*cmd_curves) {
      return run_curves(curves_sys, curves_samples, curves_csv);
    }
    if (*cmd_ellipses) {
      return run_ellipses(ellipses_sys, ellipses_resolution);
    }
    if (*cmd_moments) {
      return run_moments(moments_sys, moments_index, moments_degree);
    }
    if (*cmd_infocomp) {
      return run_infocomp(infocomp_sys, infocomp_cap);
    }
    if (*cmd_nc) {
      return run_normal_complete(nc_sys);
    }
    if (*cmd_bmv) {
      return run_bmv(bmv_sys, bmv_pairs, bmv_cap, bmv_counter_only);
    }
    if (*cmd_symmetry) {
      return run_symmetry(symmetry_sys, symmetry_p);
    }
    if (*cmd_example) {
      return run_example(example_verb, example_name, example_sys,
                         example_out);
    }
    if (*cmd_check) {
      return run_check(check_sys, check_what, check_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
