#include "wce/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "wce/reducibility.hpp"
#include "wce/vn_algebra.hpp"

namespace wce {

namespace {

class Suite {
 public:
  explicit Suite(std::string name) { result_.name = std::move(name); }

  void check(bool ok, double residual, const std::string& note) {
    ++result_.cases;
    result_.max_residual = std::max(result_.max_residual, residual);
    if (!ok) {
      ++result_.failures;
      if (result_.notes.size() < 5) result_.notes.push_back(note);
    }
  }

  void check(bool ok, const std::string& note) { check(ok, 0.0, note); }

  SuiteResult take() { return std::move(result_); }

 private:
  SuiteResult result_;
};

std::string at_trial(int trial, const std::string& what) {
  std::ostringstream out;
  out << "trial " << trial << ": " << what;
  return out.str();
}

Fn random_fn(Rng& rng, int n) {
  Fn f(n);
  for (int i = 0; i < n; ++i) f[i] = rng.box();
  return f;
}

Weights random_weights(Rng& rng, int n) {
  Weights mu(n);
  for (int i = 0; i < n; ++i) mu[i] = rng.uniform(0.1, 2.0);
  return mu;
}

Partition random_partition(Rng& rng, int n) {
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = rng.index(n);
  return Partition::from_labels(labels);
}

Partition random_coarsening(const Partition& a, Rng& rng) {
  const int m = 1 + rng.index(a.atom_count());
  std::vector<int> merge(a.atom_count());
  for (int& v : merge) v = rng.index(m);
  std::vector<int> labels(a.points());
  for (int i = 0; i < a.points(); ++i) labels[i] = merge[a.atom_of()[i]];
  return Partition::from_labels(labels);
}

Partition random_refinement(const Partition& a, Rng& rng) {
  std::vector<int> labels(a.points());
  for (int i = 0; i < a.points(); ++i)
    labels[i] = a.atom_of()[i] * 2 + rng.index(2);
  return Partition::from_labels(labels);
}

std::uint64_t mask_of(const PointSet& s) {
  std::uint64_t m = 0;
  for (int i : s) m |= std::uint64_t{1} << i;
  return m;
}

Fn support_symbol_of(const WceOperator& t) {
  return cond_expectation(t.algebra, t.space) *
         Fn(t.weight.cwiseAbs2().cast<Complex>());
}

bool has_full_support(const WceOperator& t, double tol) {
  return static_cast<int>(support(support_symbol_of(t), tol).size()) ==
         t.space.points();
}

bool subset_of(const PointSet& a, const PointSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

SuiteResult suite_measure_space(const SelftestOptions& o, std::uint64_t seed) {
  Suite s("measure-space-axioms");
  Rng rng(seed);
  for (int t = 0; t < o.trials; ++t) {
    const int n = 1 + rng.index(o.max_n);
    MeasureSpace space(random_weights(rng, n));
    Fn f = random_fn(rng, n), g = random_fn(rng, n), h = random_fn(rng, n);
    Complex alpha = rng.box();

    double scale = 1.0 + norm2(f, space) * norm2(g, space) +
                   norm2(h, space) * norm2(g, space);
    double linearity =
        std::abs(inner_product(Fn(alpha * f + h), g, space) -
                 (alpha * inner_product(f, g, space) +
                  inner_product(h, g, space)));
    s.check(linearity <= 1e-12 * scale, linearity,
            at_trial(t, "inner product linearity"));

    double symmetry = std::abs(inner_product(f, g, space) -
                               std::conj(inner_product(g, f, space)));
    s.check(symmetry <= 1e-12 * scale, symmetry,
            at_trial(t, "conjugate symmetry"));

    Complex self = inner_product(f, f, space);
    s.check(std::abs(self.imag()) <= 1e-12 * scale && self.real() >= 0.0,
            std::abs(self.imag()), at_trial(t, "positivity"));
    double norm_sq = norm2(f, space) * norm2(f, space);
    s.check(std::abs(norm_sq - self.real()) <= 1e-12 * (1.0 + norm_sq),
            std::abs(norm_sq - self.real()),
            at_trial(t, "norm agrees with inner product"));

    Fn masked = f;
    for (int i = 0; i < n; ++i)
      if (rng.uniform() < 0.5) masked[i] = Complex(0.0, 0.0);
    PointSet expected;
    for (int i = 0; i < n; ++i)
      if (masked[i] != Complex(0.0, 0.0)) expected.push_back(i);
    s.check(support(masked, 0.0) == expected,
            at_trial(t, "exact support recovery"));
  }
  return s.take();
}

SuiteResult suite_partition_lattice(const SelftestOptions& o,
                                    std::uint64_t seed) {
  Suite s("partition-lattice");
  for (int n = 1; n <= 5; ++n) {
    auto all = all_partitions(n);
    for (const auto& a : all)
      for (const auto& b : all) {
        Partition j = refine(a, b);
        Partition m = intersect(a, b);
        s.check(is_coarser(a, j) && is_coarser(b, j),
                "join is finer than both operands");
        s.check(is_coarser(m, a) && is_coarser(m, b),
                "meet is coarser than both operands");
        for (const auto& c : all) {
          s.check((is_coarser(a, c) && is_coarser(b, c)) == is_coarser(j, c),
                  "join universal property");
          s.check((is_coarser(c, a) && is_coarser(c, b)) == is_coarser(c, m),
                  "meet universal property");
        }
      }
  }

  Rng rng(seed);
  const int rounds = std::min(o.trials, 50);
  for (int t = 0; t < rounds; ++t) {
    const int n = 1 + rng.index(4);
    auto all = all_partitions(n);
    PointSet gen_set;
    for (int i = 0; i < n; ++i)
      if (rng.uniform() < 0.5) gen_set.push_back(i);
    Fn f = random_fn(rng, n);
    std::optional<Partition> base;
    if (rng.uniform() < 0.5) base = random_partition(rng, n);

    Partition g = generated_by(n, SetFamily{{gen_set}}, {f}, base, o.tol);
    s.check(g.contains_set(gen_set), at_trial(t, "generator set contained"));
    s.check(is_measurable(f, g, o.tol),
            at_trial(t, "generator function measurable"));
    if (base)
      s.check(is_coarser(*base, g), at_trial(t, "base contained"));
    for (const auto& h : all) {
      bool admits = h.contains_set(gen_set) && is_measurable(f, h, o.tol) &&
                    (!base || is_coarser(*base, h));
      if (admits)
        s.check(is_coarser(g, h), at_trial(t, "generated algebra minimal"));
    }
  }
  return s.take();
}

SuiteResult suite_partition_enumeration(const SelftestOptions&,
                                        std::uint64_t) {
  Suite s("partition-enumeration");
  const long long bell[] = {1, 1, 2, 5, 15, 52, 203};
  for (int n = 1; n <= 6; ++n) {
    auto all = all_partitions(n);
    s.check(static_cast<long long>(all.size()) == bell[n],
            "partition count matches Bell number");

    std::set<std::vector<PointSet>> seen;
    for (const auto& p : all) seen.insert(p.atoms());
    s.check(static_cast<long long>(seen.size()) == bell[n],
            "partitions are pairwise distinct");

    bool ordered = true;
    for (std::size_t i = 0; i + 1 < all.size(); ++i)
      ordered = ordered && all[i].atom_of() < all[i + 1].atom_of();
    s.check(ordered, "labels increase lexicographically");

    PartitionStream stream(n);
    bool streamed = true;
    for (const auto& p : all) {
      auto next = stream.next();
      streamed = streamed && next && *next == p;
    }
    streamed = streamed && !stream.next();
    s.check(streamed, "stream replays the materialized order");
  }

  bool capped = false;
  try {
    all_partitions(kPartitionEnumerationCap + 1);
  } catch (const CapError&) {
    capped = true;
  }
  s.check(capped, "oversized enumeration is rejected");
  return s.take();
}

SuiteResult suite_averaging_identities(const SelftestOptions& o,
                                       std::uint64_t seed) {
  Suite s("averaging-operator-identities");
  Rng rng(seed);
  for (int t = 0; t < o.trials; ++t) {
    Instance inst = random_instance(rng, o.max_n, 0.3);
    MeasureSpace space = inst.make_space();
    Partition a = inst.make_algebra();
    const int n = inst.points;
    Mat e = cond_expectation(a, space);

    double idem = op_norm(e * e - e, space);
    s.check(idem <= 1e-12, idem, at_trial(t, "idempotent"));
    double selfadj = op_norm(adjoint(e, space) - e, space);
    s.check(selfadj <= 1e-12, selfadj, at_trial(t, "self-adjoint"));
    double unit = norm2(Fn(e * Fn::Ones(n) - Fn::Ones(n)), space);
    s.check(unit <= 1e-12, unit, at_trial(t, "fixes constants"));
    double excess = std::max(0.0, op_norm(e, space) - 1.0);
    s.check(excess <= 1e-12, excess, at_trial(t, "contraction"));

    Partition b = random_coarsening(a, rng);
    Mat eb = cond_expectation(b, space);
    double tower = std::max(op_norm(eb * e - eb, space),
                            op_norm(e * eb - eb, space));
    s.check(tower <= 1e-12, tower, at_trial(t, "tower collapse"));

    Fn g(n);
    for (int i = 0; i < n; ++i) g[i] = Complex(0, 0);
    {
      std::vector<Complex> vals(a.atom_count());
      for (auto& v : vals) v = rng.box();
      for (int i = 0; i < n; ++i) g[i] = vals[a.atom_of()[i]];
    }
    double module = op_norm(e * Mat(g.asDiagonal()) - Mat(g.asDiagonal()) * e,
                            space);
    s.check(module <= 1e-12 * (1.0 + scale_of(g)), module,
            at_trial(t, "measurable symbols pass through"));

    Fn f = random_fn(rng, n);
    Fn w = e * Fn(inst.u.cwiseProduct(f));
    Fn sym = e * Fn(inst.u.cwiseAbs2().cast<Complex>());
    s.check(subset_of(support(w, 0.0), support(sym, 0.0)),
            at_trial(t, "averaged product support inclusion"));
  }
  return s.take();
}

SuiteResult suite_adjoint_identities(const SelftestOptions& o,
                                     std::uint64_t seed) {
  Suite s("operator-adjoint-identities");
  Rng rng(seed);
  for (int t = 0; t < o.trials; ++t) {
    Instance inst = random_instance(rng, o.max_n, 0.3);
    WceOperator op = inst.make_operator();
    WceIdentityReport rep = wce_identities_check(op, 1e-12);
    double worst = std::max({rep.adjoint_residual, rep.gram_residual,
                             rep.cogram_residual});
    s.check(rep.passed, worst, at_trial(t, "adjoint factorizations"));
  }
  return s.take();
}

SuiteResult suite_set_agreement(const SelftestOptions& o,
                                std::uint64_t seed) {
  Suite s("set-criterion-oracle-agreement");
  Rng rng(seed);
  for (int t = 0; t < o.trials; ++t) {
    Instance inst = random_instance(rng, std::min(o.max_n, 8), 0.3);
    WceOperator op = inst.make_operator();
    EnumeratedSets found =
        enumerate_reducing_sets(op, o.tol, o.workers);
    s.check(found.disagreements == 0,
            static_cast<double>(found.disagreements),
            at_trial(t, "criterion disagrees with commutation oracle"));

    std::set<std::uint64_t> masks;
    for (const auto& st : found.sets) masks.insert(mask_of(st));
    const std::uint64_t full = (std::uint64_t{1} << inst.points) - 1;
    bool lattice = masks.count(0) && masks.count(full);
    for (auto m1 : masks) {
      lattice = lattice && masks.count(full ^ m1);
      for (auto m2 : masks)
        lattice = lattice && masks.count(m1 | m2) && masks.count(m1 & m2);
    }
    s.check(lattice, at_trial(t, "reducing sets form a lattice"));
  }
  return s.take();
}

SuiteResult suite_subalg_agreement(const SelftestOptions& o,
                                   std::uint64_t seed) {
  Suite s("subalgebra-criterion-oracle-agreement");
  Rng rng(seed);
  for (int t = 0; t < o.trials; ++t) {
    Instance inst = random_full_support_instance(rng, std::min(o.max_n, 6));
    WceOperator op = inst.make_operator();
    EnumeratedSubalgebras found =
        enumerate_reducing_subalgebras(op, o.tol, o.workers);
    s.check(found.disagreements == 0,
            static_cast<double>(found.disagreements),
            at_trial(t, "criterion disagrees with commutation oracle"));

    bool has_discrete = false;
    for (const auto& b : found.partitions)
      has_discrete = has_discrete || b == Partition::discrete(inst.points);
    s.check(has_discrete, at_trial(t, "discrete partition always reduces"));
  }
  return s.take();
}

SuiteResult suite_nested_sufficiency(const SelftestOptions& o,
                                     std::uint64_t seed) {
  Suite s("nested-sufficiency");
  Rng rng(seed);
  for (int t = 0; t < o.trials; ++t) {
    Instance inst = random_instance(rng, o.max_n, 0.3);
    MeasureSpace space = inst.make_space();
    Partition a = inst.make_algebra();
    Partition b = rng.uniform() < 0.5 ? random_coarsening(a, rng)
                                      : random_refinement(a, rng);
    Fn u = cond_expectation(b, space) * inst.u;
    WceOperator op = wce(a, u, space);
    OracleResult res = oracle_reduces(projection_onto_subalgebra(b, space),
                                      op.realization, space, o.tol);
    s.check(res.reduces, res.commutator,
            at_trial(t, "nested measurable subalgebra must reduce"));
  }
  return s.take();
}

SuiteResult suite_reducing_necessity(const SelftestOptions& o,
                                     std::uint64_t seed) {
  Suite s("reducing-necessity");
  Rng rng(seed);
  for (int t = 0; t < o.trials; ++t) {
    Instance inst = random_instance(rng, std::min(o.max_n, 6), 0.4);
    MeasureSpace space = inst.make_space();
    WceOperator op = inst.make_operator();
    Mat ea = cond_expectation(op.algebra, space);
    Fn chi_s = indicator(support(support_symbol_of(op), o.tol), inst.points);
    double tn = op_norm(op.realization, space);

    for (const auto& b : all_partitions(inst.points)) {
      Mat eb = projection_onto_subalgebra(b, space);
      OracleResult res = oracle_reduces(eb, op.realization, space, o.tol);
      if (!res.reduces) continue;
      s.check(is_measurable(op.weight, b, o.tol),
              at_trial(t, "reducing subalgebra must carry the weight"));
      double comm = op_norm(
          (eb * ea - ea * eb) * Mat(chi_s.asDiagonal()), space);
      s.check(comm <= o.tol * (1.0 + tn), comm,
              at_trial(t, "averaging operators must commute on support"));
    }
  }
  return s.take();
}

SuiteResult suite_construction(const SelftestOptions& o, std::uint64_t seed) {
  Suite s("generated-subalgebra-construction");
  Rng rng(seed);
  for (int t = 0; t < o.trials; ++t) {
    Instance inst = random_instance(rng, o.max_n, 0.3);
    WceOperator op = inst.make_operator();
    ConstructResult r = construct_generated_reducing(op, o.tol);
    s.check(r.oracle.reduces, r.oracle.commutator,
            at_trial(t, "constructed subalgebra reduces"));
    s.check(is_measurable(op.weight, r.b, o.tol),
            at_trial(t, "weight measurable by design"));
    s.check(r.contains_base, at_trial(t, "construction refines the base"));
    s.check(r.contained_in_base == r.weight_measurable,
            at_trial(t, "containment dichotomy"));
  }
  return s.take();
}

SuiteResult suite_projection_identities(const SelftestOptions& o,
                                        std::uint64_t seed) {
  Suite s("reducing-projection-identities");
  Rng rng(seed);
  for (int t = 0; t < o.trials; ++t) {
    Instance inst = random_instance(rng, std::min(o.max_n, 6), 0.3);
    MeasureSpace space = inst.make_space();
    WceOperator op = inst.make_operator();
    const int n = inst.points;

    std::vector<Mat> candidates = {Mat::Identity(n, n), Mat::Zero(n, n)};
    EnumeratedSets sets = enumerate_reducing_sets(op, o.tol, o.workers);
    for (std::size_t i = 0; i < sets.sets.size() && i < 3; ++i)
      candidates.push_back(projection_onto_set(sets.sets[i], space));
    EnumeratedSubalgebras subs =
        enumerate_reducing_subalgebras(op, o.tol, o.workers);
    for (std::size_t i = 0; i < subs.partitions.size() && i < 2; ++i)
      candidates.push_back(
          projection_onto_subalgebra(subs.partitions[i], space));

    for (const auto& p : candidates) {
      ProjectionIdentityReport rep = prop_identities(p, op, o.tol);
      double worst = 0.0;
      for (const auto& [key, value] : rep.residuals)
        worst = std::max(worst, value);
      s.check(rep.passed, worst,
              at_trial(t, "commutation extends to adjoint and products"));
    }
  }
  return s.take();
}

SuiteResult suite_block_decomposition(const SelftestOptions& o,
                                      std::uint64_t seed) {
  Suite s("block-decomposition");
  Rng rng(seed);
  for (int t = 0; t < o.trials; ++t) {
    Instance inst = random_instance(rng, o.max_n, 0.3);
    MeasureSpace space = inst.make_space();
    Partition a = inst.make_algebra();
    Partition b = rng.uniform() < 0.5 ? random_coarsening(a, rng)
                                      : random_refinement(a, rng);
    Fn u = cond_expectation(b, space) * inst.u;
    WceOperator op = wce(a, u, space);
    Mat eb = cond_expectation(b, space);
    Mat id = Mat::Identity(inst.points, inst.points);
    double tn = op_norm(op.realization, space);
    double upper = op_norm((id - eb) * op.realization * eb, space);
    double lower = op_norm(eb * op.realization * (id - eb), space);
    s.check(upper <= o.tol * (1.0 + tn), upper,
            at_trial(t, "no flow out of the subspace"));
    s.check(lower <= o.tol * (1.0 + tn), lower,
            at_trial(t, "no flow into the subspace"));
  }
  return s.take();
}

SuiteResult suite_commutant_analysis(const SelftestOptions& o,
                                     std::uint64_t seed) {
  Suite s("commutant-generated-subalgebra");
  Rng rng(seed);
  for (int t = 0; t < o.trials; ++t) {
    Instance inst = random_instance(rng, std::min(o.max_n, 6), 0.3);
    MeasureSpace space = inst.make_space();
    WceOperator op = inst.make_operator();
    const int n = inst.points;
    double tn = op_norm(op.realization, space);

    std::vector<Mat> candidates = {Mat::Identity(n, n), Mat::Zero(n, n)};
    EnumeratedSets sets = enumerate_reducing_sets(op, o.tol, o.workers);
    for (std::size_t i = 0; i < sets.sets.size() && i < 3; ++i)
      candidates.push_back(projection_onto_set(sets.sets[i], space));
    EnumeratedSubalgebras subs =
        enumerate_reducing_subalgebras(op, o.tol, o.workers);
    for (std::size_t i = 0; i < subs.partitions.size() && i < 2; ++i)
      candidates.push_back(
          projection_onto_subalgebra(subs.partitions[i], space));

    for (const auto& p : candidates) {
      ProjectionAnalysis an = analyze_reducing_projection(p, op, o.tol);

      s.check(an.m_oracle.reduces, an.m_oracle.commutator,
              at_trial(t, "generated subalgebra fails to reduce"));
      s.check(is_coarser(an.m_algebra, op.algebra),
              at_trial(t, "generated subalgebra escapes the base"));
      s.check(an.m0_closed == (an.ea_commutator <= o.tol), an.ea_commutator,
              at_trial(t, "closure flag disagrees with commutation"));

      auto it = an.part_checks.find("scalar_action");
      if (it != an.part_checks.end())
        s.check(it->second <= 1000.0 * o.tol * (1.0 + tn), it->second,
                at_trial(t, "projection is not scalar on the subalgebra"));
      it = an.part_checks.find("set_family_match");
      if (it != an.part_checks.end())
        s.check(it->second == 0.0, it->second,
                at_trial(t, "restricted family mismatch"));
      it = an.part_checks.find("range_span");
      if (it != an.part_checks.end()) {
        bool direct = it->second <= 1000.0 * o.tol * (1.0 + tn);
        bool witnessed = an.part_checks.at("range_span_witness") == 0.0;
        s.check(direct || witnessed, it->second,
                at_trial(t, "averaged range admits no multiplier"));
      }
      s.check(an.part_checks.at("unit_biconditional") == 0.0,
              at_trial(t, "unit membership biconditional"));
      s.check(an.part_checks.at("orth_biconditional") == 0.0,
              at_trial(t, "orthogonal unit membership biconditional"));
    }
  }
  return s.take();
}

SuiteResult suite_generated_chain(const SelftestOptions& o,
                                  std::uint64_t seed) {
  Suite s("generated-chain");
  Rng rng(seed);
  bool zero_rejected = false;
  try {
    Instance inst = random_instance(rng, o.max_n, 0.0);
    chain_generated_subalgebras({Fn::Zero(inst.points)},
                                inst.make_operator(), o.tol);
  } catch (const InputError& e) {
    zero_rejected = std::string(e.code()) == "zero_span";
  }
  s.check(zero_rejected, "zero span is rejected");

  for (int t = 0; t < o.trials; ++t) {
    Instance inst = random_instance(rng, std::min(o.max_n, 6), 0.3);
    MeasureSpace space = inst.make_space();
    WceOperator op = inst.make_operator();
    const int n = inst.points;

    EnumeratedSets sets = enumerate_reducing_sets(op, o.tol, o.workers);
    for (const auto& st : sets.sets) {
      if (st.empty()) continue;
      std::vector<Fn> vectors;
      for (int i : st) vectors.push_back(indicator({i}, n));
      ChainResult chain = chain_generated_subalgebras(vectors, op, o.tol);
      s.check(chain.passed, chain.span_containment,
              at_trial(t, "chain over a reducing coordinate subspace"));
      break;
    }

    EnumeratedSubalgebras subs =
        enumerate_reducing_subalgebras(op, o.tol, o.workers);
    for (const auto& b : subs.partitions) {
      std::vector<Fn> vectors;
      for (const auto& atom : b.atoms()) vectors.push_back(indicator(atom, n));
      ChainResult chain = chain_generated_subalgebras(vectors, op, o.tol);
      s.check(chain.passed, chain.span_containment,
              at_trial(t, "chain over a reducing subalgebra subspace"));
      break;
    }
  }
  return s.take();
}

SuiteResult suite_algebra_axioms(const SelftestOptions& o,
                                 std::uint64_t seed) {
  Suite s("algebra-axioms");
  Rng rng(seed);
  for (int t = 0; t < o.trials; ++t) {
    Instance inst = random_instance(rng, o.max_n, 0.0);
    MeasureSpace space = inst.make_space();
    Partition a = inst.make_algebra();
    const int n = inst.points;
    WceAlgebra w(a, space);

    auto rep = w.verify_axioms(6, seed ^ static_cast<std::uint64_t>(t), 1e-12);
    double worst = std::max({rep.product_residual, rep.adjoint_residual,
                             rep.commutator_residual, rep.unit_residual,
                             rep.linearity_residual});
    s.check(rep.passed, worst, at_trial(t, "algebra axioms"));
    s.check(rep.numeric_dimension == a.atom_count(),
            at_trial(t, "dimension equals atom count"));

    Fn g0(n);
    {
      std::vector<Complex> vals(a.atom_count());
      for (auto& v : vals) v = rng.box();
      for (int i = 0; i < n; ++i) g0[i] = vals[a.atom_of()[i]];
    }
    auto rec = w.membership(w.element(g0, o.tol), o.tol);
    s.check(rec.has_value() &&
                norm2(Fn(*rec - g0), space) <=
                    1e-12 * (1.0 + norm2(g0, space)),
            at_trial(t, "symbol round trip"));

    const PointSet* wide = nullptr;
    for (const auto& atom : a.atoms())
      if (atom.size() >= 2) wide = &atom;
    if (wide) {
      Fn bad = g0;
      bad[(*wide)[1]] += Complex(0.5, 0.25);
      s.check(!w.membership(multiplication(bad), o.tol).has_value(),
              at_trial(t, "non-measurable symbols are rejected"));
    }
  }
  return s.take();
}

SuiteResult suite_algebra_idempotents(const SelftestOptions& o,
                                      std::uint64_t seed) {
  Suite s("algebra-idempotents");
  Rng rng(seed);
  for (int t = 0; t < o.trials; ++t) {
    Instance inst = random_instance(rng, o.max_n, 0.0);
    WceAlgebra w(inst.make_algebra(), inst.make_space());
    auto rep = w.classify_idempotents(6, seed ^ static_cast<std::uint64_t>(t),
                                      o.tol);
    s.check(rep.passed, at_trial(t, "idempotent classification"));
    s.check(rep.indicator_count ==
                (1ll << inst.make_algebra().atom_count()),
            at_trial(t, "one idempotent per atom subset"));
  }
  return s.take();
}

SuiteResult suite_instance_round_trip(const SelftestOptions& o,
                                      std::uint64_t seed) {
  Suite s("instance-round-trip");
  Rng rng(seed);
  for (int t = 0; t < o.trials; ++t) {
    Instance inst = random_instance(rng, o.max_n, 0.3);
    const int n = inst.points;
    if (rng.uniform() < 0.5) inst.b_atoms = random_partition(rng, n).atoms();
    if (rng.uniform() < 0.5) {
      PointSet st;
      for (int i = 0; i < n; ++i)
        if (rng.uniform() < 0.5) st.push_back(i);
      inst.set = st;
    }
    if (rng.uniform() < 0.5)
      inst.span = std::vector<Fn>{random_fn(rng, n), random_fn(rng, n)};
    inst.tol = 1e-9 * rng.uniform(0.5, 2.0);

    std::string text = serialize_instance(inst);
    Instance back = parse_instance(text);
    s.check(back == inst, at_trial(t, "serialization round trip"));
    s.check(serialize_instance(back) == text,
            at_trial(t, "canonical serialization is stable"));
    s.check(instance_digest(back) == instance_digest(inst),
            at_trial(t, "digest is reproducible"));
  }
  return s.take();
}

}  // namespace

Instance random_instance(Rng& rng, int max_n, double zero_probability) {
  Instance inst;
  inst.points = 1 + rng.index(max_n);
  inst.mu = random_weights(rng, inst.points);
  inst.u.resize(inst.points);
  for (int i = 0; i < inst.points; ++i)
    inst.u[i] = rng.uniform() < zero_probability ? Complex(0.0, 0.0)
                                                 : rng.box();
  inst.a_atoms = random_partition(rng, inst.points).atoms();
  return inst;
}

Instance random_full_support_instance(Rng& rng, int max_n) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    Instance inst = random_instance(rng, max_n, 0.0);
    if (has_full_support(inst.make_operator(), inst.tol)) return inst;
  }
  Instance inst = random_instance(rng, max_n, 0.0);
  inst.u.setOnes();
  return inst;
}

SelftestReport run_selftest(const SelftestOptions& options) {
  using SuiteFn = SuiteResult (*)(const SelftestOptions&, std::uint64_t);
  const SuiteFn suites[] = {
      suite_measure_space,         suite_partition_lattice,
      suite_partition_enumeration, suite_averaging_identities,
      suite_adjoint_identities,    suite_set_agreement,
      suite_subalg_agreement,      suite_nested_sufficiency,
      suite_reducing_necessity,    suite_construction,
      suite_projection_identities, suite_block_decomposition,
      suite_commutant_analysis,    suite_generated_chain,
      suite_algebra_axioms,        suite_algebra_idempotents,
      suite_instance_round_trip,
  };

  SelftestReport report;
  int idx = 0;
  for (SuiteFn fn : suites) {
    SuiteResult r = fn(options, options.seed * 1000003ull + idx++);
    report.total_cases += r.cases;
    report.total_failures += r.failures;
    report.suites.push_back(std::move(r));
  }
  report.passed = report.total_failures == 0;
  return report;
}

}  // namespace wce
