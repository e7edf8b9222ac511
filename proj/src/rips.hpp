#pragma once

// 2-skeleton of the Rips (clique) complex of an entourage, its edge-path
// group presentation, and integer first homology with explicit coordinates.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "intmat.hpp"
#include "space.hpp"

namespace ucov {

using Triangle = std::array<Index, 3>;

class RipsSkeleton {
 public:
  RipsSkeleton(const FiniteSpace& space, Entourage e);
  explicit RipsSkeleton(Entourage e);

  std::size_t size() const noexcept { return entourage_.size(); }
  const Entourage& entourage() const noexcept { return entourage_; }
  const std::vector<IndexPair>& edges() const noexcept { return edges_; }
  const std::vector<Triangle>& triangles() const noexcept { return triangles_; }

  /// BFS forest from the lowest index of each component; parent[root] == root.
  const std::vector<Index>& parent() const noexcept { return parent_; }
  const std::vector<Index>& component() const noexcept { return component_; }
  std::size_t component_count() const noexcept { return roots_.size(); }
  const std::vector<Index>& roots() const noexcept { return roots_; }
  bool is_forest_edge(Index u, Index v) const;

  /// Non-forest edges in lexicographic order; these generate the edge-path group.
  const std::vector<IndexPair>& generators() const noexcept { return generators_; }
  /// Signed generator of the oriented link u->v: +(g+1), -(g+1), or 0 for a
  /// forest edge or a repeated vertex. Throws if u, v are unrelated.
  std::int64_t signed_generator(Index u, Index v) const;

  /// Vertices from x up the forest to its root.
  std::vector<Index> path_to_root(Index x) const;

 private:
  void build();

  Entourage entourage_;
  std::vector<IndexPair> edges_;
  std::vector<Triangle> triangles_;
  std::vector<Index> parent_;
  std::vector<Index> component_;
  std::vector<Index> roots_;
  std::vector<IndexPair> generators_;
  std::vector<std::int32_t> generator_of_;  // n*n, -1 when not a generator
};

struct Letter {
  std::size_t generator;
  int exponent;  // +1 or -1
  bool operator==(const Letter&) const = default;
};
using Word = std::vector<Letter>;

struct Presentation {
  Index basepoint;
  std::vector<IndexPair> generators;
  std::vector<Word> relators;
};

Presentation edge_path_presentation(const RipsSkeleton& skel, Index basepoint);

struct AbelianGroup {
  std::size_t rank = 0;
  std::vector<Integer> torsion;  // invariant factors d1 | d2 | ..., each >= 2

  std::size_t coordinate_count() const { return rank + torsion.size(); }
  bool is_trivial() const { return rank == 0 && torsion.empty(); }
  bool operator==(const AbelianGroup&) const = default;
};

/// Sparse vector over the generators of a skeleton (edge coordinates of a
/// 1-cycle: forest edges carry no coordinate).
using EdgeVector = std::map<std::size_t, Integer>;

/// H1 of a skeleton with coordinates in the Smith basis. Coordinates list
/// the free part first, then torsion parts reduced into [0, d).
class Homology {
 public:
  explicit Homology(std::shared_ptr<const RipsSkeleton> skel);

  const RipsSkeleton& skeleton() const noexcept { return *skel_; }
  const std::shared_ptr<const RipsSkeleton>& skeleton_ptr() const noexcept { return skel_; }
  const AbelianGroup& group() const noexcept { return group_; }

  IntVector coordinates(const EdgeVector& x) const;
  /// Coordinates of the edge vector of a vertex sequence (closed or not;
  /// an open sequence is implicitly closed through the forest).
  IntVector sequence_coordinates(std::span<const Index> seq) const;
  IntVector link_coordinates(Index u, Index v) const;
  /// Reduces torsion entries into [0, d).
  IntVector normalize(IntVector c) const;
  IntVector add(const IntVector& a, const IntVector& b) const;
  IntVector negate(const IntVector& a) const;
  static bool is_zero(const IntVector& c);

  /// Edge vector representing the k-th basis element.
  EdgeVector representative(std::size_t k) const;

  /// Relations of the quotient as a lattice in coordinate space (d_i e_i for
  /// each torsion coordinate).
  std::vector<IntVector> torsion_relations() const;

 private:
  std::shared_ptr<const RipsSkeleton> skel_;
  AbelianGroup group_;
  // Eliminated generators g = sum(coef * free generator).
  std::vector<EdgeVector> pivot_expr_;
  std::vector<bool> is_pivot_;
  std::vector<std::size_t> free_index_;  // generator -> column in the residual matrix
  std::vector<std::size_t> free_generators_;
  SmithForm smith_;
  std::vector<std::size_t> coord_column_;  // coordinate -> Smith column
};

AbelianGroup h1(const RipsSkeleton& skel);

struct H1Map {
  AbelianGroup domain;
  AbelianGroup codomain;
  IntMatrix matrix;  // codomain coordinates x domain coordinates
};

/// Integer coordinates of the class of a closed chain.
IntVector h1_class(const RipsSkeleton& skel, std::span<const Index> loop);

/// Map on H1 induced by the identity on vertices, fine ⊆ coarse.
H1Map inclusion_h1_map(const Homology& fine, const Homology& coarse);

/// Image of the map as a subgroup of the codomain coordinate space
/// (includes the codomain torsion relations).
Lattice image_lattice(const H1Map& map, const Homology& codomain);

}  // namespace ucov
