#pragma once

#include <map>
#include <string>
#include <vector>

#include "wce/operators.hpp"

namespace wce {

// Ground truth for reducibility: a closed subspace reduces T exactly when
// its orthogonal projection commutes with T (self-adjointness of the
// projection makes the T* condition automatic).
struct OracleResult {
  bool reduces = false;
  double commutator = 0.0;        // |P T - T P|
  double idempotency_gap = 0.0;   // |P^2 - P|
  double self_adjoint_gap = 0.0;  // |P* - P|
};

// Throws PreconditionError("not_a_projection") unless both projection gaps
// are <= tol. The verdict is commutator <= tol * (1 + |T|).
OracleResult oracle_reduces(const Mat& p, const Mat& t,
                            const MeasureSpace& space, double tol);

// Orthogonal projections (w.r.t. the weighted inner product) onto the three
// subspace families the criteria talk about.
Mat projection_onto_set(const PointSet& s, const MeasureSpace& space);
Mat projection_onto_subalgebra(const Partition& b, const MeasureSpace& space);
// Rank-revealing; throws InputError("zero_span") when the vectors span {0}.
Mat projection_onto_span(const std::vector<Fn>& vectors,
                         const MeasureSpace& space, double tol);

// One criterion checked two ways: a closed-form test and the commutation
// oracle. In an iff regime agreement means the two verdicts coincide; in a
// partial regime it means the sufficient condition implies the oracle and
// the oracle implies the necessary conditions.
struct ReducibilityReport {
  std::string subject;
  std::string criterion;
  bool iff_regime = true;
  bool theorem_verdict = false;
  bool oracle_verdict = false;
  bool agreement = false;
  std::map<std::string, double> residuals;
};

// L2 of a set reduces T iff E(chi_S) = chi_S on the support of E(|u|^2).
ReducibilityReport reduces_set_theorem(const PointSet& a_set,
                                       const WceOperator& t, double tol);

// When E(|u|^2) is everywhere positive, L2 of a subalgebra B reduces T iff
// E_B E_A = E_meet(B,A) and u is B-measurable. Otherwise the nested
// sufficient condition and the necessary conditions are reported and only
// the implications are asserted.
ReducibilityReport reduces_subalg_theorem(const Partition& b,
                                          const WceOperator& t, double tol);

// Commutation identities satisfied by any projection that reduces T, one
// residual per closed form; thresholds are tol * (1 + |T|^2).
// Throws PreconditionError("not_reducing") when P fails the oracle.
struct ProjectionIdentityReport {
  std::map<std::string, double> residuals;
  double threshold = 0.0;
  bool passed = false;
};

ProjectionIdentityReport prop_identities(const Mat& p, const WceOperator& t,
                                         double tol);

// B = sigma-algebra generated by the level sets of u over the base algebra.
// L2(B) always reduces T; B equals the base algebra exactly when u is
// measurable with respect to it.
struct ConstructResult {
  Partition b;
  bool weight_measurable = false;  // u measurable w.r.t. the base algebra
  bool contained_in_base = false;  // b coarser than (==) the base algebra
  bool contains_base = false;      // base coarser than b (always true)
  OracleResult oracle;
};

ConstructResult construct_generated_reducing(const WceOperator& t,
                                             double tol);

// Commutant analysis of a reducing projection P:
//   p         = P(1)
//   m0        = unions S of atoms whose operator E M_{chi_S} commutes
//               with P (residual <= tol)
//   m_algebra = sigma-algebra generated by m0 and the full set
//   m0_closed = m0 is itself a sigma-algebra; equivalent to E commuting
//               with P, and the equivalence is recorded via ea_commutator
// part_checks holds one named residual per conditional property whose
// hypothesis held (0/1 values encode structural checks):
//   scalar_action      P f = E(p) . f over an indicator basis of
//                      L2(m_algebra)        [needs full support of E|u|^2]
//   set_family_match   m_algebra equals the closure of the restricted
//                      family of P's set    [needs P diagonal 0/1]
//   range_span         E(range P) = E(p) . L2(A) as column spans
//                      plus range_span_witness, 1 when some atom-supported
//                      multiplier makes the spans equal
//                                           [needs m_algebra == A]
//   unit_biconditional 1 in range P  iff  L2(m_algebra) inside range P
//   orth_biconditional 1 orthogonal to range P iff L2(m_algebra) is
// m_oracle reports whether L2(m_algebra) itself passes the commutation
// oracle. The generated subalgebra need not reduce T; see the analysis
// tests for the smallest such case.
struct ProjectionAnalysis {
  Fn p;
  SetFamily m0;
  Partition m_algebra;
  bool m0_closed = false;
  double ea_commutator = 0.0;
  OracleResult m_oracle;
  std::map<std::string, double> part_checks;
};

ProjectionAnalysis analyze_reducing_projection(const Mat& p,
                                               const WceOperator& t,
                                               double tol,
                                               int atom_cap =
                                                   kAtomEnumerationCap);

// For a reducing subspace given by spanning vectors, the chain of generated
// subalgebras: sigma(span functions, u); the same refined by the base
// algebra; and sigma(span functions) refined by the base algebra (reported
// as meaningful only when u is measurable w.r.t. the base algebra).
// Asserted relations: the first is coarser than the second, the span lies
// inside L2 of the first, and L2 of the first two pass the oracle; with a
// measurable weight the third sits between them and passes as well.
struct ChainResult {
  Partition sigma_span_weight;
  Partition sigma_span_weight_base;
  Partition sigma_span_base;
  bool weight_measurable = false;
  OracleResult oracle_span_weight;
  OracleResult oracle_span_weight_base;
  OracleResult oracle_span_base;
  double span_containment = 0.0;  // |E_B0 P - P|
  bool chain_holds = false;
  bool passed = false;
};

ChainResult chain_generated_subalgebras(const std::vector<Fn>& m_vectors,
                                        const WceOperator& t, double tol);

// Exhaustive sweeps, cross-checking the closed-form criterion against the
// oracle on every candidate. Results are in canonical order (subset masks
// by binary value; partitions in restricted-growth order).
struct EnumeratedSets {
  std::vector<PointSet> sets;
  long long candidates = 0;
  long long disagreements = 0;
};

EnumeratedSets enumerate_reducing_sets(const WceOperator& t, double tol,
                                       int workers = 1,
                                       int point_cap = kAtomEnumerationCap);

struct EnumeratedSubalgebras {
  std::vector<Partition> partitions;
  long long candidates = 0;
  long long disagreements = 0;  // counted only in the iff regime
};

EnumeratedSubalgebras enumerate_reducing_subalgebras(
    const WceOperator& t, double tol, int workers = 1,
    int partition_cap = kPartitionEnumerationCap);

}  // namespace wce
