#include "wce/measure_space.hpp"

#include <algorithm>
#include <cmath>

namespace wce {

MeasureSpace::MeasureSpace(Weights mu) : mu_(std::move(mu)) {
  if (mu_.size() == 0)
    throw InputError("empty_space", "a measure space needs at least one point");
  for (Eigen::Index i = 0; i < mu_.size(); ++i) {
    if (!std::isfinite(mu_[i]) || mu_[i] <= 0.0)
      throw InputError("bad_weight",
                       "point masses must be finite and strictly positive");
  }
  sqrt_mu_ = mu_.cwiseSqrt();
  total_ = mu_.sum();
}

Complex inner_product(const Fn& f, const Fn& g, const MeasureSpace& space) {
  if (f.size() != space.points() || g.size() != space.points())
    throw InputError("length_mismatch",
                     "function length differs from the number of points");
  // Eigen's dot conjugates its first argument.
  return g.dot(f.cwiseProduct(space.mu().cast<Complex>()));
}

double norm2(const Fn& f, const MeasureSpace& space) {
  if (f.size() != space.points())
    throw InputError("length_mismatch",
                     "function length differs from the number of points");
  double s = (f.cwiseAbs2().cwiseProduct(space.mu())).sum();
  return std::sqrt(std::max(0.0, s));
}

double scale_of(const Fn& f) {
  double sup = f.size() == 0 ? 0.0 : f.cwiseAbs().maxCoeff();
  return std::max(1.0, sup);
}

PointSet support(const Fn& f, double tol) {
  double threshold = tol * scale_of(f);
  PointSet s;
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (std::abs(f[i]) > threshold) s.push_back(static_cast<int>(i));
  return s;
}

bool all_finite(const Fn& f) {
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (!std::isfinite(f[i].real()) || !std::isfinite(f[i].imag()))
      return false;
  return true;
}

void validate_fn(const Fn& f) {
  if (!all_finite(f))
    throw InputError("nonfinite_value", "function values must be finite");
}

Fn indicator(const PointSet& s, int n) {
  Fn chi = Fn::Zero(n);
  for (int i : s) {
    if (i < 0 || i >= n)
      throw InputError("index_out_of_range", "set index out of range");
    chi[i] = Complex(1.0, 0.0);
  }
  return chi;
}

PointSet normalize_set(PointSet s, int n) {
  std::sort(s.begin(), s.end());
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] < 0 || s[k] >= n)
      throw InputError("index_out_of_range", "set index out of range");
    if (k > 0 && s[k] == s[k - 1])
      throw InputError("duplicate_index", "set indices must be distinct");
  }
  return s;
}

}  // namespace wce
