#include "wce/vn_algebra.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "wce/rng.hpp"

namespace wce {

WceAlgebra::WceAlgebra(Partition a, MeasureSpace space)
    : a_(std::move(a)), space_(std::move(space)) {
  if (a_.points() != space_.points())
    throw InputError("length_mismatch",
                     "partition and measure space sizes differ");
  e_ = cond_expectation(a_, space_);
}

Mat WceAlgebra::element(const Fn& g, double tol) const {
  if (g.size() != space_.points())
    throw InputError("length_mismatch",
                     "symbol length differs from the number of points");
  validate_fn(g);
  if (measurability_gap(g, a_) > tol * scale_of(g))
    throw PreconditionError("not_measurable",
                            "symbol is not measurable for the base algebra");
  return e_ * Mat(g.asDiagonal());
}

std::optional<Fn> WceAlgebra::membership(const Mat& op, double tol) const {
  const int n = space_.points();
  if (op.rows() != n || op.cols() != n)
    throw InputError("dimension_mismatch",
                     "operator and measure space sizes differ");
  Fn g = op * Fn::Ones(n);
  if (!all_finite(g) || measurability_gap(g, a_) > tol * scale_of(g))
    return std::nullopt;
  Mat candidate = e_ * Mat(g.asDiagonal());
  double residual = op_norm(op - candidate, space_);
  if (residual > tol * (1.0 + op_norm(op, space_))) return std::nullopt;
  return g;
}

namespace {

Fn random_symbol(const Partition& a, Rng& rng) {
  Fn g(a.points());
  std::vector<Complex> values(a.atom_count());
  for (auto& v : values) v = rng.box();
  for (int i = 0; i < a.points(); ++i) g[i] = values[a.atom_of()[i]];
  return g;
}

}  // namespace

WceAlgebra::AxiomReport WceAlgebra::verify_axioms(int samples,
                                                  std::uint64_t seed,
                                                  double tol) const {
  const int n = space_.points();
  const int k = a_.atom_count();
  Rng rng(seed);

  AxiomReport rep{};
  rep.atom_count = k;

  for (int s = 0; s < std::max(1, samples); ++s) {
    Fn g = random_symbol(a_, rng);
    Fn h = random_symbol(a_, rng);
    Complex alpha = rng.box();
    Mat mg = element(g, tol);
    Mat mh = element(h, tol);

    rep.product_residual =
        std::max(rep.product_residual,
                 op_norm(mg * mh - element(Fn(g.cwiseProduct(h)), tol),
                         space_));
    rep.adjoint_residual =
        std::max(rep.adjoint_residual,
                 op_norm(adjoint(mg, space_) - element(g.conjugate(), tol),
                         space_));
    rep.commutator_residual =
        std::max(rep.commutator_residual, op_norm(mg * mh - mh * mg, space_));
    rep.unit_residual = std::max(
        rep.unit_residual,
        std::max(op_norm(e_ * mg - mg, space_), op_norm(mg * e_ - mg, space_)));
    rep.linearity_residual =
        std::max(rep.linearity_residual,
                 op_norm(element(Fn(alpha * g + h), tol) - (alpha * mg + mh),
                         space_));
  }

  // The linear dimension of the algebra: stack atom-indicator elements (one
  // per atom) as flattened rows and take a rank-revealing decomposition.
  Mat stacked(k, n * n);
  for (int a = 0; a < k; ++a) {
    Mat m = element(indicator(a_.atoms()[a], n), tol);
    stacked.row(a) = Eigen::Map<const Fn>(m.data(), n * n).transpose();
  }
  Eigen::ColPivHouseholderQR<Mat> qr(stacked);
  qr.setThreshold(tol);
  rep.numeric_dimension = static_cast<int>(qr.rank());

  rep.passed = rep.product_residual <= tol && rep.adjoint_residual <= tol &&
               rep.commutator_residual <= tol && rep.unit_residual <= tol &&
               rep.linearity_residual <= tol && rep.numeric_dimension == k;
  return rep;
}

WceAlgebra::IdempotentReport WceAlgebra::classify_idempotents(
    int samples, std::uint64_t seed, double tol) const {
  const int n = space_.points();
  const int k = a_.atom_count();
  if (k > kAtomEnumerationCap)
    throw CapError("cap_exceeded_atoms",
                   "too many atoms for idempotent enumeration");
  Rng rng(seed);

  IdempotentReport rep{};
  rep.indicators_idempotent = true;
  rep.indicators_distinct = true;
  rep.non_indicators_rejected = true;
  rep.symbols_recoverable = true;

  std::set<std::uint64_t> recovered_patterns;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    Fn chi = Fn::Zero(n);
    for (int a = 0; a < k; ++a)
      if (mask >> a & 1) chi += indicator(a_.atoms()[a], n);
    Mat m = element(chi, tol);
    ++rep.indicator_count;

    rep.indicators_idempotent =
        rep.indicators_idempotent && op_norm(m * m - m, space_) <= tol;

    auto sym = membership(m, tol);
    bool ok = sym.has_value() &&
              norm2(Fn(*sym - chi), space_) <= tol * (1.0 + norm2(chi, space_));
    rep.symbols_recoverable = rep.symbols_recoverable && ok;

    if (ok) {
      std::uint64_t pattern = 0;
      for (int a = 0; a < k; ++a)
        if (std::abs((*sym)[a_.atoms()[a].front()]) > 0.5)
          pattern |= std::uint64_t{1} << a;
      rep.indicators_distinct =
          rep.indicators_distinct && recovered_patterns.insert(pattern).second;
    } else {
      rep.indicators_distinct = false;
    }
  }

  for (int s = 0; s < std::max(1, samples); ++s) {
    Fn g = Fn::Zero(n);
    std::uint64_t mask = rng.bits() & ((std::uint64_t{1} << k) - 1);
    for (int a = 0; a < k; ++a)
      if (mask >> a & 1) g += indicator(a_.atoms()[a], n);
    // Knock one atom's value off {0,1}; the result cannot be idempotent.
    int bad = rng.index(k);
    Complex v(rng.uniform(0.2, 0.8), rng.uniform(0.3, 0.9));
    for (int i : a_.atoms()[bad]) g[i] = v;
    Mat m = element(g, tol);
    rep.non_indicators_rejected =
        rep.non_indicators_rejected && op_norm(m * m - m, space_) > tol;
  }

  rep.passed = rep.indicators_idempotent && rep.indicators_distinct &&
               rep.non_indicators_rejected && rep.symbols_recoverable;
  return rep;
}

}  // namespace wce
