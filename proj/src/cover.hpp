#pragma once

// Covering predicates of a map between finite spaces at given scales, the
// ladder-level verdicts assembled from them, and bounded balls of the space
// of chain classes from a basepoint.

#include <optional>
#include <string>
#include <vector>

#include "chain.hpp"

namespace ucov {

/// Outcome of an exact check; `witness` explains a failure.
struct Check {
  bool ok = true;
  std::string witness;
  Json detail;  // structured counterexample (null when ok)
};

std::optional<std::size_t> generates_at(const SpaceMap& f, const Entourage& e, const ScaleLadder& candidates,
                                        std::size_t first = 0);
/// image(F)∘image(F) ⊆ image(E).
bool generates_with(const SpaceMap& f, const Entourage& e, const Entourage& finer);

Check evenly_covers(const SpaceMap& f, const Entourage& e);
Check is_simplicial_cover(const SpaceMap& f, const Entourage& e);
Check chain_lifting_at(const SpaceMap& f, const Entourage& e, const Entourage& finer);
Check transverse(const SpaceMap& f, const Entourage& e);
/// Two e-chains with equal images from a common origin are equal.
Check uniqueness_of_lifts(const SpaceMap& f, const Entourage& e);
/// finer-chains from a common origin with equal images end e-close.
Check c3_check(const SpaceMap& f, const Entourage& e, const Entourage& finer);

struct C2Result {
  bool refuted = false;
  bool proven = false;  // f injective and finer ⊆ e
  Chain alpha, beta;    // violating pair when refuted
  std::size_t pairs_checked = 0;
  bool budget_exhausted = false;
  std::string status() const {
    return refuted ? "refuted" : proven ? "holds (injective map)" : "unrefuted at budget";
  }
};

struct C2Budget {
  std::size_t max_links = 3;
  std::size_t max_pairs = 20000;
  SearchBudget search;
};

C2Result c2_check(const SpaceMap& f, const Entourage& e, const Entourage& finer, const C2Budget& budget = {});

struct ScaleChecks {
  Check evenly, simplicial, transverse, uniqueness;
  std::optional<std::size_t> generates;  // strictly finer ladder index
};

struct PairChecks {
  std::size_t coarse = 0, fine = 0;  // fine >= coarse
  Check lifting, c3;
  C2Result c2;
};

struct CoverReport {
  std::vector<double> thresholds;
  std::vector<ScaleChecks> scales;
  std::vector<PairChecks> pairs;
  bool uniform_cover = false;
  std::string uniform_cover_failure;  // failing predicate, when negative
  bool simplicial_base = false;
  bool c1 = false, c3 = false, c2_refuted = false;
  std::string generalized_failure;
};

CoverReport uniform_cover_verdict(const SpaceMap& f, const ScaleLadder& ladder, const C2Budget& budget = {},
                                  unsigned threads = 0);
Json cover_report_to_json(const CoverReport& r);

struct CoverBall {
  struct Vertex {
    Index endpoint;
    Chain witness;
    std::size_t depth;
  };
  Index basepoint = 0;
  std::size_t radius = 0;
  std::vector<Vertex> vertices;
  std::vector<IndexPair> edges;  // vertex ids, first < second
  bool truncated = false;    // some class beyond the radius was left out
  bool approximate = false;  // an undecided comparison kept two vertices apart
  std::vector<std::vector<std::size_t>> fibers() const;  // by endpoint
};

CoverBall build_cover_ball(const Entourage& e, Index basepoint, std::size_t radius, const SearchBudget& budget = {});
Json cover_ball_to_json(const CoverBall& b, const FiniteSpace* space = nullptr);
std::string cover_ball_to_dot(const CoverBall& b, const FiniteSpace* space = nullptr);

}  // namespace ucov
