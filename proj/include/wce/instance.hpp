#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wce/operators.hpp"
#include "wce/sigma_algebra.hpp"

namespace wce {

// A problem instance as exchanged with the command line tool: the measure
// space, the weight, the base partition, and whichever optional payload the
// requested command needs. Complex numbers travel as [re, im] pairs.
struct Instance {
  int points = 0;
  Weights mu;
  Fn u;
  std::vector<PointSet> a_atoms;
  std::optional<std::vector<PointSet>> b_atoms;
  std::optional<PointSet> set;
  std::optional<std::vector<Fn>> span;
  double tol = 1e-9;

  MeasureSpace make_space() const;
  Partition make_algebra() const;
  std::optional<Partition> make_subalgebra() const;
  WceOperator make_operator() const;
};

bool operator==(const Instance& lhs, const Instance& rhs);

// Throws InputError with a distinct machine-readable code per failure shape:
// parse_error, not_an_object, missing_points, bad_points, missing_mu, bad_mu,
// missing_u, bad_u, bad_complex, missing_algebra, bad_algebra,
// bad_subalgebra, bad_set, bad_span, bad_tol.
Instance parse_instance(const std::string& text);

// Canonical serialization: sorted keys, shortest round-trip numbers, absent
// optionals omitted. parse_instance(serialize_instance(i)) == i.
std::string serialize_instance(const Instance& instance);

// FNV-1a (64 bit) over the canonical serialization, as fixed-width hex.
std::string instance_digest(const Instance& instance);

}  // namespace wce
