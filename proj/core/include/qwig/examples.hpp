#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qwig/operators.hpp"

namespace qwig {

// A catalog system: validated operator tuple plus a state, with a short
// human-readable description of where it comes from.
struct NamedExample {
  std::string name;
  OperatorTuple tuple;
  DensityMatrix state;
  std::string notes;
};

// All recognized catalog names (seeded entries listed with their default
// parameters, e.g. "dihedral-5").
std::vector<std::string> example_names();

// Build a catalog entry by name. Seeded entries (dihedral-*,
// nearly-commuting) draw from `seed`; closed-form entries ignore it.
NamedExample make_example(const std::string& name,
                          std::uint64_t seed = kDefaultSeed);

// The Pauli matrices.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

// (sigma_x, sigma_y) with the state fixed by a Bloch vector, |bloch| <= 1.
NamedExample make_pauli2(const Eigen::Vector3d& bloch);

// Symmetric pair for the dihedral group D_p acting on C^p by the
// permutation module (rotation = cyclic shift, reflection = index
// reversal). The pair transforms under the 2-D rotation representation:
// shift conjugation rotates (A_1, A_2) by 2*pi/p, reflection conjugation
// maps (A_1, A_2) -> (-A_1, A_2). State: maximally mixed. Requires p > 2.
NamedExample dihedral_multiplet(int p, std::uint64_t seed = kDefaultSeed);

// Group generators of the D_p action.
Matrix dihedral_shift(int p);
Matrix dihedral_reflection(int p);

// Character-weighted group average 2/|G| * sum_g tr(R_g) U_g X U_g^*
// projecting onto the isotypic component of the 2-D rotation
// representation. Reflections have trace zero, so only shifts contribute.
Matrix dihedral_twirl(const Matrix& x);

// The twirl as a real-linear map in an orthonormal Hermitian basis
// (diagonal units, then (E_ij+E_ji)/sqrt2 and i(E_ij-E_ji)/sqrt2 pairs in
// row-major pair order); a p^2 x p^2 real matrix.
RealMatrix dihedral_twirl_matrix(int p);

// Numerical rank of the twirl map (singular values above rel * largest).
int dihedral_twirl_rank(int p, double rel_threshold = 1e-8);

// max-entry defect of T*T - T in the same basis.
double dihedral_twirl_idempotence_defect(int p);

// Five nearly commuting diagonal points (+-1, +-1) and (0, 2) with seeded
// zero-diagonal Hermitian couplings scaled by eps_prime. State: maximally
// mixed.
NamedExample make_nearly_commuting(double eps_prime,
                                   std::uint64_t seed = kDefaultSeed);

// Closed-form radial profile of the smoothed distribution for the qubit
// triple (sigma_x, sigma_y, sigma_z) with tr-2 state rho = identity:
//   W_eps(s) = [e^{-(s+1)^2/4eps}(s+1) + e^{-(s-1)^2/4eps}(s-1)]
//              / (8 pi^{3/2} s eps^{3/2}).
// The unit-trace rho = I/2 profile is half this. The s = 0 singularity is
// removable and evaluated by its limit.
double qubit3_radial(double s, double epsilon);

// Closed-form radial profile for the qubit pair (sigma_x, sigma_y) with
// unit-trace state rho = I/2:
//   W_eps(r) = Im[ i (eps - i) ((eps - i)^2 + r^2)^{-3/2} ] / (2 pi),
// the analytic lambda-derivative at lambda = 1 of
// Im[((eps - i lambda)^2 + r^2)^{-1/2}] / (2 pi), principal branch.
double qubit2_reference(double r, double epsilon);

// The eps -> 0 limit away from the unit circle, -1/(2 pi (1-r^2)^{3/2});
// valid for r < 1.
double qubit2_regular_part(double r);

// State dependence enters the qubit distribution as the linear factor
// (1 + bloch . a) / 2 relative to the tr-2 identity-state reference.
double qubit_wigner_state_factor(const RealVector& a, const RealVector& bloch);

// Quadrature checks of the closed forms (adaptive Gauss-Kronrod):
// 2 pi Integral_0^inf r W_eps(r) dr for the pair reference (exact value 1).
double qubit2_normalization(double epsilon);
// 4 pi Integral_0^inf s^power W_eps(s) ds for the triple reference
// (power = 2 gives 2; power = 4 gives 6 + 12 eps; power = 3 gives 4).
double qubit3_moment(int power, double epsilon);
// Radial variance <s^2> - <s>^2 of the unit-trace triple profile; equals
// -1 + 6 eps, negative for small eps (the distribution is not pointwise
// positive, so this is not a contradiction).
double qubit3_paradox_variance(double epsilon);
// Linear Richardson extrapolation 2 v(eps/2) - v(eps) of the variance,
// removing the O(eps) smoothing bias; equals -1 identically.
double qubit3_paradox_extrapolated(double epsilon);

}  // namespace qwig
