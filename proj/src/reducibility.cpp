#include "wce/reducibility.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <utility>

namespace wce {

namespace {

std::string set_to_string(const PointSet& s) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out << ',';
    out << s[i];
  }
  out << '}';
  return out.str();
}

std::string partition_to_string(const Partition& p) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < p.atoms().size(); ++i) {
    if (i) out << ',';
    out << set_to_string(p.atoms()[i]);
  }
  out << '}';
  return out.str();
}

Mat stack_columns(const std::vector<Fn>& fns, const MeasureSpace& space) {
  const int n = space.points();
  Mat cols(n, static_cast<int>(fns.size()));
  for (std::size_t k = 0; k < fns.size(); ++k) {
    if (fns[k].size() != n)
      throw InputError("length_mismatch",
                       "span vector length differs from the number of points");
    validate_fn(fns[k]);
    cols.col(static_cast<int>(k)) = fns[k];
  }
  return cols;
}

// Orthonormal frame (Euclidean, in the sqrt(mu)-scaled coordinates) for the
// column span of `cols`, with a rank decision at the given relative tolerance.
std::pair<Mat, int> weighted_frame(const Mat& cols, const MeasureSpace& space,
                                   double tol) {
  const int n = space.points();
  Mat b = cols;
  for (int i = 0; i < n; ++i) b.row(i) *= space.sqrt_mu()[i];
  if (b.cols() == 0) return {Mat::Zero(n, 0), 0};
  Eigen::ColPivHouseholderQR<Mat> qr(b);
  qr.setThreshold(tol);
  const int rank = static_cast<int>(qr.rank());
  Mat q = qr.householderQ() * Mat::Identity(n, rank);
  return {std::move(q), rank};
}

Mat projection_from_frame(const Mat& q, const MeasureSpace& space) {
  const int n = space.points();
  Mat pe = q * q.adjoint();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      pe(i, j) *= space.sqrt_mu()[j] / space.sqrt_mu()[i];
  return pe;
}

double euclid_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

PointSet full_point_set(int n) {
  PointSet all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  return all;
}

Fn support_symbol(const WceOperator& t) {
  Fn abs2 = t.weight.cwiseAbs2().cast<Complex>();
  return cond_expectation(t.algebra, t.space) * abs2;
}

bool is_full_support(const WceOperator& t, double tol) {
  return static_cast<int>(support(support_symbol(t), tol).size()) ==
         t.space.points();
}

}  // namespace

OracleResult oracle_reduces(const Mat& p, const Mat& t,
                            const MeasureSpace& space, double tol) {
  OracleResult r;
  r.idempotency_gap = op_norm(compose(p, p) - p, space);
  r.self_adjoint_gap = op_norm(adjoint(p, space) - p, space);
  if (r.idempotency_gap > tol || r.self_adjoint_gap > tol)
    throw PreconditionError("not_a_projection",
                            "operator is not an orthogonal projection");
  r.commutator = op_norm(compose(p, t) - compose(t, p), space);
  r.reduces = r.commutator <= tol * (1.0 + op_norm(t, space));
  return r;
}

Mat projection_onto_set(const PointSet& set, const MeasureSpace& space) {
  PointSet s = normalize_set(set, space.points());
  return indicator(s, space.points()).asDiagonal();
}

Mat projection_onto_subalgebra(const Partition& b, const MeasureSpace& space) {
  return cond_expectation(b, space);
}

Mat projection_onto_span(const std::vector<Fn>& fns, const MeasureSpace& space,
                         double tol) {
  if (fns.empty()) throw InputError("zero_span", "empty spanning list");
  Mat cols = stack_columns(fns, space);
  auto [q, rank] = weighted_frame(cols, space, tol);
  if (rank == 0)
    throw InputError("zero_span", "spanning vectors are numerically zero");
  return projection_from_frame(q, space);
}

ReducibilityReport reduces_set_theorem(const PointSet& set,
                                       const WceOperator& t, double tol) {
  const auto& space = t.space;
  const int n = space.points();
  PointSet s = normalize_set(set, n);

  Fn chi = indicator(s, n);
  Mat e = cond_expectation(t.algebra, space);
  Fn echi = e * chi;
  PointSet supp = support(support_symbol(t), tol);

  double gap = 0.0;
  for (int x : supp) gap = std::max(gap, std::abs(echi[x] - chi[x]));

  Mat p = projection_onto_set(s, space);
  OracleResult oracle = oracle_reduces(p, t.realization, space, tol);

  ReducibilityReport rep;
  rep.subject = "set " + set_to_string(s);
  rep.criterion = "indicator-fixed-on-support";
  rep.iff_regime = true;
  rep.theorem_verdict = gap <= tol;
  rep.oracle_verdict = oracle.reduces;
  rep.agreement = rep.theorem_verdict == rep.oracle_verdict;
  rep.residuals["indicator_gap"] = gap;
  rep.residuals["commutator"] = oracle.commutator;
  return rep;
}

ReducibilityReport reduces_subalg_theorem(const Partition& b,
                                          const WceOperator& t, double tol) {
  const auto& space = t.space;
  if (b.points() != space.points())
    throw InputError("length_mismatch",
                     "partition and measure space sizes differ");

  Mat ea = cond_expectation(t.algebra, space);
  Mat eb = cond_expectation(b, space);
  OracleResult oracle = oracle_reduces(eb, t.realization, space, tol);
  double mgap = measurability_gap(t.weight, b);
  bool u_meas = mgap <= tol * scale_of(t.weight);

  ReducibilityReport rep;
  rep.subject = "partition " + partition_to_string(b);
  rep.oracle_verdict = oracle.reduces;
  rep.residuals["commutator"] = oracle.commutator;
  rep.residuals["measurability_gap"] = mgap;

  if (is_full_support(t, tol)) {
    Mat emeet = cond_expectation(intersect(b, t.algebra), space);
    double product_residual = op_norm(compose(eb, ea) - emeet, space);
    rep.criterion = "projection-product-and-measurability";
    rep.iff_regime = true;
    rep.theorem_verdict = product_residual <= tol && u_meas;
    rep.agreement = rep.theorem_verdict == rep.oracle_verdict;
    rep.residuals["product_residual"] = product_residual;
  } else {
    // Outside the full-support regime only one-directional statements are
    // available: coarser-and-measurable is sufficient, and any reducing
    // subalgebra must carry the weight and commute with the averaging on
    // the support of the symbol.
    bool sufficient = is_coarser(b, t.algebra) && u_meas;
    Fn chi_s = indicator(support(support_symbol(t), tol), space.points());
    double support_commutator =
        op_norm(compose(compose(eb, ea) - compose(ea, eb),
                        Mat(chi_s.asDiagonal())),
                space);
    bool necessary = u_meas && support_commutator <= tol;
    rep.criterion = "nested-sufficiency-and-support-necessity";
    rep.iff_regime = false;
    rep.theorem_verdict = sufficient;
    rep.agreement = (!sufficient || rep.oracle_verdict) &&
                    (!rep.oracle_verdict || necessary);
    rep.residuals["support_commutator"] = support_commutator;
    rep.residuals["necessary_ok"] = necessary ? 0.0 : 1.0;
  }
  return rep;
}

ProjectionIdentityReport prop_identities(const Mat& p, const WceOperator& t,
                                         double tol) {
  const auto& space = t.space;
  OracleResult oracle = oracle_reduces(p, t.realization, space, tol);
  if (!oracle.reduces)
    throw PreconditionError("not_reducing",
                            "projection does not commute with the operator");

  Mat tm = t.realization;
  Mat ts = adjoint(tm, space);
  Mat gram = compose(ts, tm);
  Mat cogram = compose(tm, ts);
  Mat iterated = compose(tm, cogram);

  auto comm = [&](const Mat& a) { return op_norm(a * p - p * a, space); };

  ProjectionIdentityReport rep;
  rep.residuals["with_operator"] = comm(tm);
  rep.residuals["with_adjoint"] = comm(ts);
  rep.residuals["with_cogram"] = comm(cogram);
  rep.residuals["with_gram"] = comm(gram);
  rep.residuals["with_iterated"] = comm(iterated);
  double tn = op_norm(tm, space);
  rep.threshold = tol * (1.0 + tn * tn);
  rep.passed = true;
  for (const auto& [key, value] : rep.residuals)
    rep.passed = rep.passed && value <= rep.threshold;
  return rep;
}

ConstructResult construct_generated_reducing(const WceOperator& t,
                                             double tol) {
  const auto& space = t.space;
  Partition b = generated_by(space.points(), SetFamily{}, {t.weight},
                             t.algebra, tol);
  Mat eb = projection_onto_subalgebra(b, space);

  ConstructResult r{b,
                    is_measurable(t.weight, t.algebra, tol),
                    is_coarser(b, t.algebra),
                    is_coarser(t.algebra, b),
                    oracle_reduces(eb, t.realization, space, tol)};
  return r;
}

ProjectionAnalysis analyze_reducing_projection(const Mat& p,
                                               const WceOperator& t,
                                               double tol, int atom_cap) {
  const auto& space = t.space;
  const int n = space.points();
  OracleResult given = oracle_reduces(p, t.realization, space, tol);
  if (!given.reduces)
    throw PreconditionError("not_reducing",
                            "projection does not commute with the operator");

  const auto& atoms = t.algebra.atoms();
  const int k = t.algebra.atom_count();
  if (k > atom_cap)
    throw CapError("cap_exceeded_atoms",
                   "too many atoms for subset enumeration");

  Mat e = cond_expectation(t.algebra, space);
  Fn pvec = p * Fn::Ones(n);
  double ea_commutator = op_norm(compose(e, p) - compose(p, e), space);

  // Commutators of E^A M_{chi_S} with P are additive in the atoms of S.
  std::vector<Mat> atom_comms;
  atom_comms.reserve(k);
  for (const auto& atom : atoms) {
    Mat em = compose(e, Mat(indicator(atom, n).asDiagonal()));
    atom_comms.push_back(compose(em, p) - compose(p, em));
  }

  SetFamily m0;
  std::vector<std::uint64_t> member_masks;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    Mat sum = Mat::Zero(n, n);
    for (int a = 0; a < k; ++a)
      if (mask >> a & 1) sum += atom_comms[a];
    if (op_norm(sum, space) <= tol) {
      member_masks.push_back(mask);
      PointSet s;
      for (int a = 0; a < k; ++a)
        if (mask >> a & 1) s.insert(s.end(), atoms[a].begin(), atoms[a].end());
      m0.sets.push_back(normalize_set(s, n));
    }
  }

  bool m0_closed;
  {
    std::vector<bool> seen(std::size_t{1} << k, false);
    for (auto m : member_masks) seen[m] = true;
    const std::uint64_t full = (std::uint64_t{1} << k) - 1;
    bool closed = seen[0] && seen[full];
    for (auto m : member_masks) closed = closed && seen[full ^ m];
    for (auto m1 : member_masks)
      for (auto m2 : member_masks) closed = closed && seen[m1 | m2];
    m0_closed = closed;
  }

  Partition m_algebra = generated_by(n, m0, {}, std::nullopt, tol);
  Mat em_alg = projection_onto_subalgebra(m_algebra, space);
  OracleResult m_oracle = oracle_reduces(em_alg, t.realization, space, tol);

  ProjectionAnalysis out{std::move(pvec), std::move(m0), std::move(m_algebra),
                         m0_closed,       ea_commutator, m_oracle,
                         {}};

  std::vector<Fn> m_basis;
  for (const auto& atom : out.m_algebra.atoms())
    m_basis.push_back(indicator(atom, n));

  if (is_full_support(t, tol)) {
    Fn ep = e * out.p;
    double worst = 0.0;
    for (const auto& f : m_basis) {
      Fn lhs = p * f;
      Fn rhs = ep.cwiseProduct(f);
      worst = std::max(worst,
                       norm2(Fn(lhs - rhs), space) / (1.0 + norm2(f, space)));
    }
    out.part_checks["scalar_action"] = worst;
  }

  {
    double off = 0.0, diag = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j)
          diag = std::max(diag, std::min(std::abs(p(i, i)),
                                         std::abs(p(i, i) - 1.0)));
        else
          off = std::max(off, std::abs(p(i, j)));
      }
    if (off <= tol && diag <= tol) {
      PointSet a_set;
      for (int i = 0; i < n; ++i)
        if (std::abs(p(i, i) - 1.0) <= tol) a_set.push_back(i);
      SetFamily family = restricted_family(a_set, t.algebra, atom_cap);
      Partition closure = generated_by(n, family, {}, std::nullopt, tol);
      out.part_checks["set_family_match"] =
          closure == out.m_algebra ? 0.0 : 1.0;
    }
  }

  if (out.m_algebra == t.algebra) {
    Fn ep = e * out.p;
    Mat lhs_cols = compose(e, p);
    Mat rhs_cols = compose(Mat(ep.asDiagonal()), e);
    auto [q1, r1] = weighted_frame(lhs_cols, space, tol);
    auto [q2, r2] = weighted_frame(rhs_cols, space, tol);
    out.part_checks["range_span"] =
        euclid_norm(q1 * q1.adjoint() - q2 * q2.adjoint());
    // A multiplicative witness for the averaged range exists exactly when
    // that range is spanned by indicators: its dimension must match the
    // number of atoms its columns touch.
    double col_scale = tol * (1.0 + lhs_cols.cwiseAbs().maxCoeff());
    std::vector<bool> touched(k, false);
    for (int j = 0; j < lhs_cols.cols(); ++j)
      for (int i = 0; i < n; ++i)
        if (std::abs(lhs_cols(i, j)) > col_scale)
          touched[t.algebra.atom_of()[i]] = true;
    int covered = 0;
    for (bool b : touched) covered += b ? 1 : 0;
    out.part_checks["range_span_witness"] = r1 == covered ? 0.0 : 1.0;
    (void)r2;
  }

  {
    Fn ones = Fn::Ones(n);
    bool unit_in = norm2(Fn(out.p - ones), space) <=
                   tol * (1.0 + norm2(ones, space));
    bool basis_in = true;
    bool basis_out = true;
    for (const auto& f : m_basis) {
      double scl = 1.0 + norm2(f, space);
      basis_in = basis_in && norm2(Fn(p * f - f), space) <= tol * scl;
      basis_out = basis_out && norm2(Fn(p * f), space) <= tol * scl;
    }
    bool unit_out = norm2(out.p, space) <= tol * (1.0 + norm2(ones, space));
    out.part_checks["unit_biconditional"] = unit_in == basis_in ? 0.0 : 1.0;
    out.part_checks["orth_biconditional"] = unit_out == basis_out ? 0.0 : 1.0;
  }

  return out;
}

ChainResult chain_generated_subalgebras(const std::vector<Fn>& m_vectors,
                                        const WceOperator& t, double tol) {
  const auto& space = t.space;
  const int n = space.points();
  Mat p = projection_onto_span(m_vectors, space, tol);
  OracleResult span_oracle = oracle_reduces(p, t.realization, space, tol);
  if (!span_oracle.reduces)
    throw PreconditionError("not_reducing",
                            "span projection does not commute");

  std::vector<Fn> with_weight = m_vectors;
  with_weight.push_back(t.weight);

  ChainResult r{generated_by(n, SetFamily{}, with_weight, std::nullopt, tol),
                generated_by(n, SetFamily{}, with_weight, t.algebra, tol),
                generated_by(n, SetFamily{}, m_vectors, t.algebra, tol),
                is_measurable(t.weight, t.algebra, tol),
                {},
                {},
                {},
                0.0,
                false,
                false};

  r.oracle_span_weight = oracle_reduces(
      projection_onto_subalgebra(r.sigma_span_weight, space), t.realization,
      space, tol);
  r.oracle_span_weight_base = oracle_reduces(
      projection_onto_subalgebra(r.sigma_span_weight_base, space),
      t.realization, space, tol);
  r.oracle_span_base = oracle_reduces(
      projection_onto_subalgebra(r.sigma_span_base, space), t.realization,
      space, tol);

  for (const auto& f : m_vectors)
    r.span_containment =
        std::max(r.span_containment, measurability_gap(f, r.sigma_span_weight));

  r.chain_holds = is_coarser(r.sigma_span_weight, r.sigma_span_weight_base) &&
                  r.span_containment <= tol;
  bool base_branch = true;
  if (r.weight_measurable)
    base_branch = is_coarser(r.sigma_span_weight, r.sigma_span_base) &&
                  is_coarser(r.sigma_span_base, r.sigma_span_weight_base) &&
                  r.oracle_span_base.reduces;
  r.passed = r.chain_holds && r.oracle_span_weight.reduces &&
             r.oracle_span_weight_base.reduces && base_branch;
  return r;
}

EnumeratedSets enumerate_reducing_sets(const WceOperator& t, double tol,
                                       int workers, int point_cap) {
  const int n = t.space.points();
  if (n > point_cap)
    throw CapError("cap_exceeded_points",
                   "too many points for subset enumeration");

  const std::uint64_t total = std::uint64_t{1} << n;
  struct Slot {
    std::vector<PointSet> sets;
    long long disagreements = 0;
  };
  workers = std::max(1, workers);
  std::vector<Slot> slots(workers);

  auto run = [&](int w, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      PointSet s;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) s.push_back(i);
      ReducibilityReport rep = reduces_set_theorem(s, t, tol);
      if (!rep.agreement) ++slots[w].disagreements;
      if (rep.oracle_verdict) slots[w].sets.push_back(std::move(s));
    }
  };

  if (workers == 1) {
    run(0, 0, total);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      std::uint64_t lo = std::min(total, chunk * w);
      std::uint64_t hi = std::min(total, lo + chunk);
      pool.emplace_back(run, w, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  EnumeratedSets out;
  out.candidates = static_cast<long long>(total);
  out.disagreements = 0;
  for (auto& slot : slots) {
    out.disagreements += slot.disagreements;
    for (auto& s : slot.sets) out.sets.push_back(std::move(s));
  }
  return out;
}

EnumeratedSubalgebras enumerate_reducing_subalgebras(const WceOperator& t,
                                                     double tol, int workers,
                                                     int partition_cap) {
  const auto& space = t.space;
  std::vector<Partition> all = all_partitions(space.points(), partition_cap);
  const bool full = is_full_support(t, tol);

  struct Slot {
    std::vector<std::size_t> hits;
    long long disagreements = 0;
  };
  workers = std::max(1, workers);
  std::vector<Slot> slots(workers);

  auto run = [&](int w, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      if (full) {
        ReducibilityReport rep = reduces_subalg_theorem(all[i], t, tol);
        if (!rep.agreement) ++slots[w].disagreements;
        if (rep.oracle_verdict) slots[w].hits.push_back(i);
      } else {
        Mat eb = projection_onto_subalgebra(all[i], space);
        if (oracle_reduces(eb, t.realization, space, tol).reduces)
          slots[w].hits.push_back(i);
      }
    }
  };

  if (workers == 1) {
    run(0, 0, all.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (all.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      std::size_t lo = std::min(all.size(), chunk * w);
      std::size_t hi = std::min(all.size(), lo + chunk);
      pool.emplace_back(run, w, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  EnumeratedSubalgebras out;
  out.candidates = static_cast<long long>(all.size());
  out.disagreements = 0;
  std::vector<std::size_t> hits;
  for (auto& slot : slots) {
    out.disagreements += slot.disagreements;
    hits.insert(hits.end(), slot.hits.begin(), slot.hits.end());
  }
  std::sort(hits.begin(), hits.end());
  for (auto i : hits) out.partitions.push_back(all[i]);
  return out;
}

}  // namespace wce
