#pragma once

#include <optional>
#include <vector>

#include "wce/measure_space.hpp"

namespace wce {

// Bell(10) = 115975 partitions; streaming more than that is opt-in.
inline constexpr int kPartitionEnumerationCap = 10;
// Subset sweeps walk 2^k candidates.
inline constexpr int kAtomEnumerationCap = 20;

// A sigma-subalgebra of the full power set, represented by its partition
// into atoms. Canonical form: atoms are sorted by their smallest point and
// each atom lists its points in increasing order, which makes structural
// equality meaningful.
class Partition {
 public:
  static Partition from_atoms(const std::vector<PointSet>& blocks, int n);
  // Any labelling; relabelled by first appearance, which yields the
  // canonical form directly.
  static Partition from_labels(const std::vector<int>& labels);
  static Partition discrete(int n);
  static Partition trivial(int n);

  int points() const { return static_cast<int>(atom_of_.size()); }
  int atom_count() const { return static_cast<int>(atoms_.size()); }
  const std::vector<PointSet>& atoms() const { return atoms_; }
  const std::vector<int>& atom_of() const { return atom_of_; }

  // True when s is a union of atoms, i.e. a member of the sigma-algebra.
  bool contains_set(const PointSet& s) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  Partition() = default;
  std::vector<PointSet> atoms_;
  std::vector<int> atom_of_;
};

struct SetFamily {
  std::vector<PointSet> sets;
};

// Largest deviation of f from being constant on the atoms of p
// (max over atoms of the max pairwise modulus distance).
double measurability_gap(const Fn& f, const Partition& p);

// gap <= tol * scale_of(f)
bool is_measurable(const Fn& f, const Partition& p, double tol);

// Every atom of b is a union of atoms of a; as sigma-algebras, b is a
// subalgebra of a.
bool is_coarser(const Partition& b, const Partition& a);

// Join: coarsest partition finer than both (pairwise atom intersections).
Partition refine(const Partition& a, const Partition& b);

// Meet: finest partition coarser than both, i.e. the intersection of the
// two sigma-algebras. Atoms are the connected components of the graph that
// links points sharing an atom in either partition.
Partition intersect(const Partition& a, const Partition& b);

// Smallest sigma-algebra containing every generator set, making every
// generator function measurable, and (when given) containing base.
// Function level sets are grouped by tolerance-transitive clustering:
// values x, y land in one cluster when a chain of merges
// |f(x)-f(y)| <= tol * scale_of(f) connects them.
Partition generated_by(int n, const SetFamily& sets,
                       const std::vector<Fn>& functions,
                       const std::optional<Partition>& base, double tol);

// All unions b of atoms of a such that a_set ∩ b is again a union of atoms.
// Equivalently: all unions of the atoms that a_set either contains or
// misses entirely. Enumeration order is the binary counter over those
// atoms in canonical order.
SetFamily restricted_family(const PointSet& a_set, const Partition& a,
                            int atom_cap = kAtomEnumerationCap);

// Streams every partition of 0..n-1 exactly once, in restricted-growth
// string order (the canonical order of Partition::from_labels).
class PartitionStream {
 public:
  explicit PartitionStream(int n, int cap = kPartitionEnumerationCap);
  std::optional<Partition> next();

 private:
  int n_ = 0;
  bool first_ = true;
  bool done_ = false;
  std::vector<int> rgs_;
  std::vector<int> maxes_;
};

std::vector<Partition> all_partitions(int n,
                                      int cap = kPartitionEnumerationCap);

}  // namespace wce
