#pragma once

#include "wce/measure_space.hpp"
#include "wce/sigma_algebra.hpp"

namespace wce {

// Matrix of the conditional expectation onto L2 of the given partition:
// (E f)(x) = (integral of f over the atom of x) / (mass of that atom).
// It is the orthogonal projection onto the atom-constant functions with
// respect to the weighted inner product.
Mat cond_expectation(const Partition& a, const MeasureSpace& space);

// Diagonal multiplication operator f -> u .* f.
Mat multiplication(const Fn& u);

// Adjoint with respect to the weighted inner product:
// a* = D^{-1} a^H D with D = diag(mu).
Mat adjoint(const Mat& op, const MeasureSpace& space);

// Operator norm induced by the weighted L2 norm: the largest singular
// value of D^{1/2} a D^{-1/2}.
double op_norm(const Mat& op, const MeasureSpace& space);

Mat compose(const Mat& a, const Mat& b);
Mat sub(const Mat& a, const Mat& b);

// The weighted conditional expectation operator T = E M_u, f -> E(u f),
// together with the data that defines it.
struct WceOperator {
  Partition algebra;
  Fn weight;
  MeasureSpace space;
  Mat realization;
};

WceOperator wce(const Partition& a, const Fn& u, const MeasureSpace& space);

// Residuals of the closed adjoint forms, each measured in the induced
// operator norm and compared against tol * (1 + |T|^2):
//   T*   = M_conj(u) E
//   T* T = M_conj(u) E M_u
//   T T* = E M_w with w = E(|u|^2)
struct WceIdentityReport {
  double adjoint_residual = 0.0;
  double gram_residual = 0.0;
  double cogram_residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

WceIdentityReport wce_identities_check(const WceOperator& t, double tol);

}  // namespace wce
