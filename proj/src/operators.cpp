#include "wce/operators.hpp"

#include <Eigen/SVD>

#include <utility>

namespace wce {

Mat cond_expectation(const Partition& a, const MeasureSpace& space) {
  const int n = space.points();
  if (a.points() != n)
    throw InputError("length_mismatch",
                     "partition and measure space sizes differ");
  Mat e = Mat::Zero(n, n);
  for (const auto& atom : a.atoms()) {
    double mass = 0.0;
    for (int i : atom) mass += space.mu()[i];
    for (int i : atom)
      for (int j : atom) e(i, j) = Complex(space.mu()[j] / mass, 0.0);
  }
  return e;
}

Mat multiplication(const Fn& u) {
  validate_fn(u);
  return u.asDiagonal();
}

Mat adjoint(const Mat& op, const MeasureSpace& space) {
  const int n = space.points();
  if (op.rows() != n || op.cols() != n)
    throw InputError("dimension_mismatch",
                     "operator and measure space sizes differ");
  Mat a = op.adjoint();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) *= space.mu()[j] / space.mu()[i];
  return a;
}

double op_norm(const Mat& op, const MeasureSpace& space) {
  const int n = space.points();
  if (op.rows() != n || op.cols() != n)
    throw InputError("dimension_mismatch",
                     "operator and measure space sizes differ");
  // Conjugating by D^{1/2} turns the weighted norm into the spectral norm.
  Mat s = op;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s(i, j) *= space.sqrt_mu()[i] / space.sqrt_mu()[j];
  return Eigen::JacobiSVD<Mat>(s).singularValues()(0);
}

Mat compose(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows())
    throw InputError("dimension_mismatch", "operator shapes do not compose");
  return a * b;
}

Mat sub(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InputError("dimension_mismatch", "operator shapes differ");
  return a - b;
}

WceOperator wce(const Partition& a, const Fn& u, const MeasureSpace& space) {
  if (u.size() != space.points())
    throw InputError("length_mismatch",
                     "weight length differs from the number of points");
  validate_fn(u);
  Mat realization = cond_expectation(a, space) * Mat(u.asDiagonal());
  return WceOperator{a, u, space, std::move(realization)};
}

WceIdentityReport wce_identities_check(const WceOperator& t, double tol) {
  const auto& space = t.space;
  Mat e = cond_expectation(t.algebra, space);
  Mat mu_conj = multiplication(t.weight.conjugate());
  Mat m_u = multiplication(t.weight);
  Fn w = (e * Fn(t.weight.cwiseAbs2().cast<Complex>()));

  Mat t_star = adjoint(t.realization, space);
  WceIdentityReport r;
  r.adjoint_residual = op_norm(t_star - mu_conj * e, space);
  r.gram_residual = op_norm(t_star * t.realization - mu_conj * e * m_u, space);
  r.cogram_residual =
      op_norm(t.realization * t_star - e * multiplication(w), space);
  double tn = op_norm(t.realization, space);
  r.threshold = tol * (1.0 + tn * tn);
  r.passed = r.adjoint_residual <= r.threshold &&
             r.gram_residual <= r.threshold &&
             r.cogram_residual <= r.threshold;
  return r;
}

}  // namespace wce
