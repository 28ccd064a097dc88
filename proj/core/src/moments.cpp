#include "qwig/moments.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qwig {

int total_degree(const MultiIndex& r) {
  return std::accumulate(r.begin(), r.end(), 0);
}

std::vector<MultiIndex> indices_of_degree(int n, int degree) {
  std::vector<MultiIndex> out;
  MultiIndex current(n, 0);
  // Recursive enumeration in lexicographic order.
  auto recurse = [&](auto&& self, int axis, int remaining) -> void {
    if (axis == n - 1) {
      current[axis] = remaining;
      out.push_back(current);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      current[axis] = v;
      self(self, axis + 1, remaining - v);
    }
  };
  if (n > 0 && degree >= 0) {
    recurse(recurse, 0, degree);
  }
  return out;
}

std::size_t MomentTable::IndexHash::operator()(const MultiIndex& r) const {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (int v : r) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) +
         (h >> 2);
  }
  return h;
}

MomentTable::MomentTable(OperatorTuple a, int degree_cap)
    : tuple_(std::move(a)), degree_cap_(degree_cap) {}

const Matrix& MomentTable::moment(const MultiIndex& r) {
  if (static_cast<int>(r.size()) != tuple_.n()) {
    throw DimensionMismatch("multi-index length does not match tuple");
  }
  for (int v : r) {
    if (v < 0) {
      throw Error("multi-index entries must be nonnegative");
    }
  }
  const int degree = total_degree(r);
  if (degree > degree_cap_) {
    std::ostringstream os;
    os << "moment degree " << degree << " exceeds cap " << degree_cap_;
    throw DegreeTooHigh(os.str());
  }
  auto it = cache_.find(r);
  if (it != cache_.end()) {
    return it->second;
  }
  Matrix value;
  if (degree == 0) {
    value = Matrix::Identity(tuple_.d(), tuple_.d());
  } else {
    value = Matrix::Zero(tuple_.d(), tuple_.d());
    MultiIndex lower = r;
    for (int k = 0; k < tuple_.n(); ++k) {
      if (r[k] == 0) {
        continue;
      }
      lower[k] -= 1;
      value += static_cast<double>(r[k]) * (tuple_.op(k) * moment(lower));
      lower[k] += 1;
    }
    value /= static_cast<double>(degree);
  }
  return cache_.emplace(r, std::move(value)).first->second;
}

Matrix weyl_moment(const OperatorTuple& a, const MultiIndex& r,
                   int degree_cap) {
  MomentTable table(a, degree_cap);
  return table.moment(r);
}

double check_multinomial(const OperatorTuple& a, const RealVector& xi,
                         int degree) {
  if (xi.size() != a.n()) {
    throw DimensionMismatch("xi length does not match tuple");
  }
  auto factorial = [](int v) {
    double out = 1.0;
    for (int i = 2; i <= v; ++i) {
      out *= i;
    }
    return out;
  };
  MomentTable table(a, degree);
  Matrix sum = Matrix::Zero(a.d(), a.d());
  for (const MultiIndex& r : indices_of_degree(a.n(), degree)) {
    double coefficient = factorial(degree);
    double monomial = 1.0;
    for (int k = 0; k < a.n(); ++k) {
      coefficient /= factorial(r[k]);
      monomial *= std::pow(xi(k), r[k]);
    }
    sum += coefficient * monomial * table.moment(r);
  }
  Matrix power = Matrix::Identity(a.d(), a.d());
  const Matrix combined = a.combine(xi);
  for (int i = 0; i < degree; ++i) {
    power = combined * power;
  }
  return (sum - power).cwiseAbs().maxCoeff();
}

Matrix quantize(const OperatorTuple& a, const Polynomial& poly,
                int degree_cap) {
  MomentTable table(a, degree_cap);
  Matrix out = Matrix::Zero(a.d(), a.d());
  for (const auto& [coefficient, r] : poly.terms) {
    out += coefficient * table.moment(r);
  }
  return out;
}

double commutator_orthogonality(const OperatorTuple& a, int degree_cap) {
  if (a.n() != 2) {
    throw DimensionMismatch("commutator orthogonality is defined for pairs");
  }
  const Matrix commutator =
      Complex(0.0, 1.0) * (a.op(0) * a.op(1) - a.op(1) * a.op(0));
  MomentTable table(a, degree_cap);
  double worst = 0.0;
  for (int degree = 0; degree <= degree_cap; ++degree) {
    for (const MultiIndex& r : indices_of_degree(2, degree)) {
      const double value =
          std::abs((commutator * table.moment(r)).trace());
      worst = std::max(worst, value);
    }
  }
  return worst;
}

namespace {

int gram_rank(const std::vector<Matrix>& mats, double rank_rel) {
  if (mats.empty()) {
    return 0;
  }
  const int m = static_cast<int>(mats.size());
  RealMatrix gram(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double inner = (mats[i] * mats[j]).trace().real();
      gram(i, j) = inner;
      gram(j, i) = inner;
    }
  }
  Eigen::JacobiSVD<RealMatrix> svd(gram);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0) {
    return 0;
  }
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > rank_rel * sv(0)) {
      ++rank;
    }
  }
  return rank;
}

}  // namespace

SpanDimension weyl_span_dimension(const OperatorTuple& a, int degree_cap,
                                  const Tolerances& tol) {
  const int d = a.d();
  const int hard_cap = (degree_cap >= 0) ? degree_cap : d * d;
  MomentTable table(a, hard_cap);
  std::vector<Matrix> normalized;
  SpanDimension result;
  for (int degree = 0; degree <= hard_cap; ++degree) {
    for (const MultiIndex& r : indices_of_degree(a.n(), degree)) {
      Matrix m = table.moment(r);
      m = 0.5 * (m + m.adjoint().eval());
      const double norm = std::sqrt(std::abs((m * m).trace().real()));
      if (norm > 1e-14) {
        normalized.push_back(m / norm);
      }
    }
    const int rank = gram_rank(normalized, tol.rank_rel);
    result.rank_history.push_back(rank);
    result.degree_reached = degree;
    result.dimension = rank;
    if (rank >= d * d) {
      break;
    }
    if (degree_cap < 0 && result.rank_history.size() >= 3) {
      const auto& h = result.rank_history;
      const std::size_t last = h.size() - 1;
      if (h[last] == h[last - 1] && h[last] == h[last - 2]) {
        break;
      }
    }
  }
  return result;
}

bool info_complete(const OperatorTuple& a, const Tolerances& tol) {
  return weyl_span_dimension(a, -1, tol).dimension == a.d() * a.d();
}

double incomp_trace_identity(const OperatorTuple& a, int samples, Rng& rng,
                             int moment_degree) {
  if (a.n() != 2) {
    throw DimensionMismatch("trace identity is defined for pairs");
  }
  MomentTable table(a, moment_degree);
  std::vector<MultiIndex> all_indices;
  for (int degree = 0; degree <= moment_degree; ++degree) {
    for (const MultiIndex& r : indices_of_degree(2, degree)) {
      all_indices.push_back(r);
    }
  }
  auto draw = [&]() {
    Matrix p = Matrix::Zero(a.d(), a.d());
    for (const MultiIndex& r : all_indices) {
      p += rng.normal() * table.moment(r);
    }
    return p;
  };
  const Matrix& a1 = a.op(0);
  const Matrix& a2 = a.op(1);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Matrix p1 = draw();
    const Matrix p2 = draw();
    const Complex lhs = (a1 * p1 * a2 * p2).trace();
    const Complex rhs = (a2 * p1 * a1 * p2).trace();
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

NormalCompleteness normal_complete(const Matrix& a1, const Matrix& a2,
                                   const Tolerances& tol) {
  const PencilEigen e1 = eigendecompose(a1, tol);
  const PencilEigen e2 = eigendecompose(a2, tol);
  for (const PencilEigen* e : {&e1, &e2}) {
    if (static_cast<int>(e->clusters.size()) != e->d()) {
      throw DegenerateSpectrum(
          "normally-ordered completeness requires simple spectra");
    }
  }
  NormalCompleteness out;
  out.min_overlap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < e1.d(); ++i) {
    for (int j = 0; j < e2.d(); ++j) {
      const double overlap = std::abs(
          (e1.eigenvectors.col(i).adjoint() * e2.eigenvectors.col(j)).value());
      if (overlap < out.min_overlap) {
        out.min_overlap = overlap;
        out.witness_i = i;
        out.witness_j = j;
      }
    }
  }
  out.complete = out.min_overlap > tol.orthogonality;
  return out;
}

double bmv_mixed_moment(const Matrix& a1, const Matrix& a2, int n, int m,
                        const Tolerances& tol) {
  for (const Matrix* mat : {&a1, &a2}) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(*mat, Eigen::EigenvaluesOnly);
    const double scale =
        std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff());
    if (solver.eigenvalues().minCoeff() < -tol.psd * scale) {
      throw NotPsd("mixed-moment positivity requires psd inputs");
    }
  }
  const OperatorTuple pair = OperatorTuple::validate({a1, a2});
  return weyl_moment(pair, {n, m}, n + m).trace().real();
}

double bmv_triple_counterexample() {
  std::vector<Matrix> projections;
  for (int k = 1; k <= 3; ++k) {
    const double angle = 2.0 * M_PI * k / 3.0;
    Vector phi(2);
    phi << Complex(std::cos(angle), 0.0), Complex(std::sin(angle), 0.0);
    projections.push_back(phi * phi.adjoint());
  }
  const Matrix& a = projections[0];
  const Matrix& b = projections[1];
  const Matrix& c = projections[2];
  return (a * b * c + c * b * a).trace().real();
}

}  // namespace qwig
