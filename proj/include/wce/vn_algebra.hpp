#pragma once

#include <cstdint>
#include <optional>

#include "wce/operators.hpp"

namespace wce {

// The commutative unital *-algebra { E M_g : g measurable w.r.t. a }.
// In finite dimension it is automatically closed in every operator
// topology, so the von Neumann algebra structure reduces to the algebraic
// axioms checked below. The unit is E itself (g = 1) and the linear
// dimension equals the number of atoms.
class WceAlgebra {
 public:
  WceAlgebra(Partition a, MeasureSpace space);

  const Partition& algebra() const { return a_; }
  const MeasureSpace& space() const { return space_; }
  const Mat& unit() const { return e_; }

  // Throws InputError("not_measurable") unless g is constant on atoms
  // within tol * scale_of(g).
  Mat element(const Fn& g, double tol) const;

  // Recovers the symbol of a member: op(1) must be measurable and must
  // reproduce op as E M_{op(1)} within tol. Returns nothing otherwise.
  std::optional<Fn> membership(const Mat& op, double tol) const;

  struct AxiomReport {
    double product_residual = 0.0;    // E M_g E M_h = E M_{g h}
    double adjoint_residual = 0.0;    // (E M_g)* = E M_conj(g)
    double commutator_residual = 0.0;
    double unit_residual = 0.0;       // E M_1 acts as identity on members
    double linearity_residual = 0.0;
    int numeric_dimension = 0;        // rank of the stacked atom basis
    int atom_count = 0;
    bool passed = false;
  };

  // Randomized sampling of the axioms plus the exact dimension check.
  AxiomReport verify_axioms(int samples, std::uint64_t seed,
                            double tol) const;

  struct IdempotentReport {
    long long indicator_count = 0;      // 2^atoms candidates checked
    bool indicators_idempotent = false; // every E M_{chi_S} squares to itself
    bool indicators_distinct = false;
    bool non_indicators_rejected = false;  // sampled g with an atom value
                                           // outside {0,1} is never idempotent
    bool symbols_recoverable = false;   // membership inverts element
    bool passed = false;
  };

  // Exhaustive classification of the idempotents: exactly the indicator
  // elements E M_{chi_S} over unions S of atoms. The converse direction
  // rests on symbol recovery (an idempotent's symbol solves g^2 = g atom by
  // atom), which is checked via membership round trips and rejected
  // perturbations.
  IdempotentReport classify_idempotents(int samples, std::uint64_t seed,
                                        double tol) const;

 private:
  Partition a_;
  MeasureSpace space_;
  Mat e_;
};

}  // namespace wce
