#pragma once

// H1 towers along a scale ladder, image stabilization diagnostics, and
// joinability witnesses (short chains at a coarse scale built from fine links).

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chain.hpp"

namespace ucov {

struct StabilizationResult {
  bool found = false;
  std::size_t at = 0;
};

struct TowerReport {
  std::vector<double> thresholds;  // empty when the ladder came without a metric
  Index basepoint = 0;
  std::vector<std::shared_ptr<const Homology>> homology;  // coarsest first
  std::vector<std::size_t> components;
  std::vector<H1Map> bonding;  // bonding[i]: scale i+1 -> scale i
  // maps[a][c] and images[a][c] for c > a: H1(eps_c) -> H1(eps_a) and its image.
  std::vector<std::vector<IntMatrix>> maps;
  std::vector<std::vector<Lattice>> images;
  std::vector<StabilizationResult> ml;       // per index; last entry unused
  std::vector<StabilizationResult> trivial;  // per index; last entry unused

  std::size_t size() const { return homology.size(); }
};

/// Reduces the rows of torsion coordinates of `codomain` into [0, d).
IntMatrix normalize_rows(IntMatrix m, const AbelianGroup& codomain);

TowerReport build_tower(const ScaleLadder& ladder, Index basepoint = 0, unsigned threads = 0);

StabilizationResult ml_diagnostic(const TowerReport& tower, std::size_t a);
StabilizationResult triviality_diagnostic(const TowerReport& tower, std::size_t a);

Json tower_to_json(const TowerReport& tower);
std::string tower_table(const TowerReport& tower);

struct JoinBudget {
  SearchBudget search;
  long class_norm = 8;
};

struct JoinabilityVerdict {
  Index x = 0, y = 0;
  Verdict verdict = Verdict::unknown;
  Chain witness;  // fine chain from x to y (yes)
  std::optional<HomotopyCertificate> certificate;
  // no: one of the following holds
  bool endpoint_obstruction = false;  // (x,y) outside the target scale
  bool unreachable = false;           // no fine chain from x to y
  IntVector obstruction;              // class outside the image of the fine scale
  std::size_t states = 0;
  std::string note;
};

/// Precomputed data for repeated witness searches between two scales.
class JoinContext {
 public:
  JoinContext(std::shared_ptr<const Homology> target, std::shared_ptr<const Homology> fine);

  const Homology& target() const { return *target_; }
  const Homology& fine() const { return *fine_; }
  const Lattice& image() const { return image_; }
  const Entourage& target_relation() const { return target_->skeleton().entourage(); }
  const Entourage& fine_relation() const { return fine_->skeleton().entourage(); }

  /// Fine forest path from x to y through the root of their component.
  std::optional<Chain> fine_path(Index x, Index y) const;
  /// Target-scale class of the edge vector of an open chain.
  IntVector chain_class(std::span<const Index> seq) const { return target_->sequence_coordinates(seq); }

  JoinabilityVerdict witness(Index x, Index y, const JoinBudget& budget) const;
  /// G(E) membership through `base`: fine chains c: base->x, d: base->y with
  /// c⁻¹·d short at the target scale.
  JoinabilityVerdict through_base(Index base, Index x, Index y, const JoinBudget& budget) const;

 private:
  std::optional<Chain> class_search(Index x, Index y, const IntVector& goal, const JoinBudget& budget,
                                    std::size_t& states, bool& pruned) const;

  std::shared_ptr<const Homology> target_;
  std::shared_ptr<const Homology> fine_;
  Lattice image_;
};

JoinabilityVerdict joinability_witness(const Entourage& target, const Entourage& fine, Index x, Index y,
                                       const JoinBudget& budget = {});

Json join_to_json(const JoinabilityVerdict& v, const FiniteSpace* space = nullptr);

struct JoinAuditCell {
  std::size_t coarse = 0, fine = 0;  // ladder indices
  std::size_t pairs = 0, yes = 0, no = 0, unknown = 0;
  std::vector<IndexPair> failures;  // pairs without a witness
};

struct JoinAudit {
  std::vector<JoinAuditCell> cells;
  std::vector<std::optional<std::size_t>> supported_by;  // per coarse index: first fully witnessed finer index
  bool supported = false;
};

JoinAudit uniform_joinability_audit(const ScaleLadder& ladder, const JoinBudget& budget = {}, unsigned threads = 0);
Json audit_to_json(const JoinAudit& audit);

struct GEntourage {
  Entourage relation;  // certified pairs plus the diagonal
  Index basepoint = 0;
  std::vector<JoinabilityVerdict> pairs;  // one per pair x<y of E
};

GEntourage g_entourage(const Entourage& e, const ScaleLadder& ladder, Index basepoint, const JoinBudget& budget = {},
                       unsigned threads = 0);
Json g_entourage_to_json(const GEntourage& g, const FiniteSpace* space = nullptr);

}  // namespace ucov
