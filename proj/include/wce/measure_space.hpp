#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "wce/errors.hpp"

namespace wce {

using Complex = std::complex<double>;
using Fn = Eigen::VectorXcd;        // complex-valued function on the points
using Mat = Eigen::MatrixXcd;       // linear operator in the point basis
using Weights = Eigen::VectorXd;    // point masses
using PointSet = std::vector<int>;  // strictly increasing point indices

// Finite measure space on points 0..n-1. Masses are strictly positive, so
// almost-everywhere notions coincide with pointwise ones and every function
// class has exactly one representative.
class MeasureSpace {
 public:
  explicit MeasureSpace(Weights mu);

  int points() const { return static_cast<int>(mu_.size()); }
  const Weights& mu() const { return mu_; }
  const Weights& sqrt_mu() const { return sqrt_mu_; }
  double total_mass() const { return total_; }

 private:
  Weights mu_;
  Weights sqrt_mu_;
  double total_ = 0.0;
};

// <f,g> = sum_i f[i] * conj(g[i]) * mu[i]; conjugate-linear in g.
Complex inner_product(const Fn& f, const Fn& g, const MeasureSpace& space);

double norm2(const Fn& f, const MeasureSpace& space);

// max(1, sup-norm). Used to turn absolute tolerances into relative ones
// without blowing up near zero.
double scale_of(const Fn& f);

// Points where |f| exceeds tol * scale_of(f). With tol = 0 this is the set
// of exact non-zeros.
PointSet support(const Fn& f, double tol);

bool all_finite(const Fn& f);

// Throws InputError("nonfinite_value") when f has a NaN or infinity.
void validate_fn(const Fn& f);

Fn indicator(const PointSet& s, int n);

// Sorts, checks 0 <= index < n, and rejects duplicates.
PointSet normalize_set(PointSet s, int n);

}  // namespace wce
