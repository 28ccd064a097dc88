#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "qwig/operators.hpp"

namespace qwig {

// Exponent vector r = (r_1, ..., r_n) of a monomial a^r.
using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& r);

// All multi-indices over n variables with total degree exactly R, in
// deterministic lexicographic order.
std::vector<MultiIndex> indices_of_degree(int n, int degree);

// Memoized table of symmetrized operator moments M^r: the average of the
// products of r_1 copies of A_1, ..., r_n copies of A_n over all orderings.
// Built through the recursion M^r = (1/R) sum_k r_k A_k M^{r - e_k} (group
// the orderings by their first factor), which agrees with the brute-force
// permutation average but runs in polynomial time.
class MomentTable {
 public:
  explicit MomentTable(OperatorTuple a, int degree_cap = 10);

  // Throws DegreeTooHigh above the cap, DimensionMismatch on wrong length.
  const Matrix& moment(const MultiIndex& r);

  const OperatorTuple& tuple() const { return tuple_; }
  int degree_cap() const { return degree_cap_; }

 private:
  struct IndexHash {
    std::size_t operator()(const MultiIndex& r) const;
  };
  OperatorTuple tuple_;
  int degree_cap_;
  std::unordered_map<MultiIndex, Matrix, IndexHash> cache_;
};

// Convenience wrapper for a single moment.
Matrix weyl_moment(const OperatorTuple& a, const MultiIndex& r,
                   int degree_cap = 10);

// Max-entry residual of the noncommutative multinomial identity
// sum_{|r|=R} (R! / prod r_k!) xi^r M^r = (xi.A)^R.
double check_multinomial(const OperatorTuple& a, const RealVector& xi,
                         int degree);

// Real-coefficient polynomial in n variables, sparse term list.
struct Polynomial {
  std::vector<std::pair<double, MultiIndex>> terms;
};

// Linear extension of the monomial -> symmetrized-moment substitution.
Matrix quantize(const OperatorTuple& a, const Polynomial& poly,
                int degree_cap = 10);

// max over r with total degree <= degree_cap of |tr(i [A_1, A_2] M^r)|.
// Identically zero in exact arithmetic for any pair.
double commutator_orthogonality(const OperatorTuple& a, int degree_cap);

// Real dimension of span_R { M^r } inside Hermitian matrices, via the rank
// of the Gram matrix tr(X Y) of Frobenius-normalized moments. degree_cap < 0
// selects the saturation rule: grow the degree until the rank is unchanged
// for two consecutive degrees (or the degree reaches d^2, or the rank does).
struct SpanDimension {
  int dimension = 0;
  int degree_reached = 0;
  std::vector<int> rank_history;  // rank after including degree 0, 1, ...
};

SpanDimension weyl_span_dimension(const OperatorTuple& a, int degree_cap = -1,
                                  const Tolerances& tol = {});

// True iff the moments span all Hermitian matrices (dimension d^2), i.e. the
// state is determined by the distribution.
bool info_complete(const OperatorTuple& a, const Tolerances& tol = {});

// For pairs: max residual |tr(A_1 P_1 A_2 P_2) - tr(A_2 P_1 A_1 P_2)| over
// sampled P_i drawn as random real combinations of moments with degree <=
// moment_degree. Zero in exact arithmetic; large for generic Hermitian P.
double incomp_trace_identity(const OperatorTuple& a, int samples, Rng& rng,
                             int moment_degree = 4);

// Completeness test for normally ordered moments of a pair: true iff no
// eigenvector of A_1 is orthogonal to an eigenvector of A_2.
struct NormalCompleteness {
  bool complete = false;
  double min_overlap = 0.0;
  int witness_i = -1;  // eigenvector index of A_1 achieving the minimum
  int witness_j = -1;  // eigenvector index of A_2
};

NormalCompleteness normal_complete(const Matrix& a1, const Matrix& a2,
                                   const Tolerances& tol = {});

// tr M^{(n,m)}(A_1, A_2) for positive semidefinite inputs (checked).
double bmv_mixed_moment(const Matrix& a1, const Matrix& a2, int n, int m,
                        const Tolerances& tol = {});

// The three-projection configuration with pairwise overlaps cos(2 pi / 3):
// returns tr(ABC + CBA) = 2 Re(<p1|p2><p2|p3><p3|p1>) = -1/4, showing that
// mixed-moment positivity has no three-operator analogue.
double bmv_triple_counterexample();

}  // namespace qwig
