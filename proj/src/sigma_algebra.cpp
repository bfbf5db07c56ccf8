#include "wce/sigma_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace wce {

namespace {

struct Dsu {
  explicit Dsu(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
  std::vector<int> parent;
};

std::vector<int> cluster_labels(const Fn& f, double tol) {
  const int n = static_cast<int>(f.size());
  double threshold = tol * scale_of(f);
  Dsu dsu(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(f[i] - f[j]) <= threshold) dsu.unite(i, j);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = dsu.find(i);
  return labels;
}

}  // namespace

Partition Partition::from_labels(const std::vector<int>& labels) {
  const int n = static_cast<int>(labels.size());
  if (n == 0)
    throw InputError("empty_space", "a partition needs at least one point");
  Partition p;
  p.atom_of_.resize(n);
  std::unordered_map<int, int> remap;
  for (int i = 0; i < n; ++i) {
    auto [it, fresh] = remap.try_emplace(labels[i],
                                         static_cast<int>(p.atoms_.size()));
    if (fresh) p.atoms_.emplace_back();
    p.atom_of_[i] = it->second;
    p.atoms_[it->second].push_back(i);
  }
  return p;
}

Partition Partition::from_atoms(const std::vector<PointSet>& blocks, int n) {
  if (n <= 0)
    throw InputError("empty_space", "a partition needs at least one point");
  std::vector<int> labels(n, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty())
      throw InputError("empty_atom", "atoms must be non-empty");
    for (int i : blocks[b]) {
      if (i < 0 || i >= n)
        throw InputError("index_out_of_range", "atom index out of range");
      if (labels[i] != -1)
        throw InputError("atoms_overlap", "atoms must be pairwise disjoint");
      labels[i] = static_cast<int>(b);
    }
  }
  for (int i = 0; i < n; ++i)
    if (labels[i] == -1)
      throw InputError("atoms_gap", "atoms must cover every point");
  return from_labels(labels);
}

Partition Partition::discrete(int n) {
  std::vector<int> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  return from_labels(labels);
}

Partition Partition::trivial(int n) {
  return from_labels(std::vector<int>(n, 0));
}

bool Partition::contains_set(const PointSet& s) const {
  std::vector<char> in(points(), 0);
  for (int i : s) {
    if (i < 0 || i >= points()) return false;
    in[i] = 1;
  }
  for (const auto& atom : atoms_) {
    int hits = 0;
    for (int i : atom) hits += in[i];
    if (hits != 0 && hits != static_cast<int>(atom.size())) return false;
  }
  return true;
}

double measurability_gap(const Fn& f, const Partition& p) {
  if (f.size() != p.points())
    throw InputError("length_mismatch",
                     "function length differs from the number of points");
  double gap = 0.0;
  for (const auto& atom : p.atoms())
    for (std::size_t a = 0; a < atom.size(); ++a)
      for (std::size_t b = a + 1; b < atom.size(); ++b)
        gap = std::max(gap, std::abs(f[atom[a]] - f[atom[b]]));
  return gap;
}

bool is_measurable(const Fn& f, const Partition& p, double tol) {
  return measurability_gap(f, p) <= tol * scale_of(f);
}

bool is_coarser(const Partition& b, const Partition& a) {
  if (a.points() != b.points())
    throw InputError("length_mismatch", "partitions live on different spaces");
  for (const auto& atom : a.atoms()) {
    int label = b.atom_of()[atom.front()];
    for (int i : atom)
      if (b.atom_of()[i] != label) return false;
  }
  return true;
}

Partition refine(const Partition& a, const Partition& b) {
  if (a.points() != b.points())
    throw InputError("length_mismatch", "partitions live on different spaces");
  const int n = a.points();
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i)
    labels[i] = a.atom_of()[i] * b.atom_count() + b.atom_of()[i];
  return Partition::from_labels(labels);
}

Partition intersect(const Partition& a, const Partition& b) {
  if (a.points() != b.points())
    throw InputError("length_mismatch", "partitions live on different spaces");
  const int n = a.points();
  Dsu dsu(n);
  for (const auto& atom : a.atoms())
    for (std::size_t k = 1; k < atom.size(); ++k) dsu.unite(atom[0], atom[k]);
  for (const auto& atom : b.atoms())
    for (std::size_t k = 1; k < atom.size(); ++k) dsu.unite(atom[0], atom[k]);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = dsu.find(i);
  return Partition::from_labels(labels);
}

Partition generated_by(int n, const SetFamily& sets,
                       const std::vector<Fn>& functions,
                       const std::optional<Partition>& base, double tol) {
  if (n <= 0)
    throw InputError("empty_space", "a partition needs at least one point");
  if (base && base->points() != n)
    throw InputError("length_mismatch", "base partition has the wrong size");
  Partition result = base ? *base : Partition::trivial(n);
  for (const auto& s : sets.sets) {
    std::vector<int> labels(n, 0);
    for (int i : s) {
      if (i < 0 || i >= n)
        throw InputError("index_out_of_range", "set index out of range");
      labels[i] = 1;
    }
    result = refine(result, Partition::from_labels(labels));
  }
  for (const auto& f : functions) {
    if (f.size() != n)
      throw InputError("length_mismatch",
                       "function length differs from the number of points");
    validate_fn(f);
    result = refine(result, Partition::from_labels(cluster_labels(f, tol)));
  }
  return result;
}

SetFamily restricted_family(const PointSet& a_set, const Partition& a,
                            int atom_cap) {
  const int n = a.points();
  std::vector<char> in(n, 0);
  for (int i : a_set) {
    if (i < 0 || i >= n)
      throw InputError("index_out_of_range", "set index out of range");
    in[i] = 1;
  }
  // An atom is admissible when a_set contains it or misses it; a union of
  // atoms intersects a_set in a union of atoms exactly when every atom it
  // uses is admissible.
  std::vector<const PointSet*> admissible;
  for (const auto& atom : a.atoms()) {
    int hits = 0;
    for (int i : atom) hits += in[i];
    if (hits == 0 || hits == static_cast<int>(atom.size()))
      admissible.push_back(&atom);
  }
  const int k = static_cast<int>(admissible.size());
  if (k > atom_cap)
    throw CapError("cap_exceeded_atoms",
                   "restricted family would enumerate 2^" + std::to_string(k) +
                       " sets; raise the cap to allow this");
  SetFamily family;
  family.sets.reserve(std::size_t{1} << k);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    PointSet s;
    for (int j = 0; j < k; ++j)
      if (mask >> j & 1) s.insert(s.end(), admissible[j]->begin(),
                                  admissible[j]->end());
    std::sort(s.begin(), s.end());
    family.sets.push_back(std::move(s));
  }
  return family;
}

PartitionStream::PartitionStream(int n, int cap) : n_(n) {
  if (n < 1)
    throw InputError("empty_space", "a partition needs at least one point");
  if (n > cap)
    throw CapError("cap_exceeded_partitions",
                   "partition enumeration capped at " + std::to_string(cap) +
                       " points");
  rgs_.assign(n, 0);
  maxes_.assign(n, 0);
}

std::optional<Partition> PartitionStream::next() {
  if (done_) return std::nullopt;
  if (first_) {
    first_ = false;
    return Partition::from_labels(rgs_);
  }
  // Lexicographic successor of the restricted-growth string: bump the
  // rightmost digit that may grow, zero everything after it.
  int i = n_ - 1;
  while (i >= 1 && rgs_[i] > maxes_[i - 1]) --i;
  if (i < 1) {
    done_ = true;
    return std::nullopt;
  }
  ++rgs_[i];
  maxes_[i] = std::max(maxes_[i - 1], rgs_[i]);
  for (int j = i + 1; j < n_; ++j) {
    rgs_[j] = 0;
    maxes_[j] = maxes_[j - 1];
  }
  return Partition::from_labels(rgs_);
}

std::vector<Partition> all_partitions(int n, int cap) {
  PartitionStream stream(n, cap);
  std::vector<Partition> out;
  while (auto p = stream.next()) out.push_back(std::move(*p));
  return out;
}

}  // namespace wce
