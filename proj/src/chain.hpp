#pragma once

// Chains at a scale, simplicial moves, replayable homotopy certificates and
// the three-valued homotopy deciders.

#include <optional>
#include <string>
#include <vector>

#include "io.hpp"
#include "rips.hpp"

namespace ucov {

using Chain = std::vector<Index>;

/// Position of the first link (seq[i], seq[i+1]) outside e, if any.
std::optional<std::size_t> first_invalid_link(const Entourage& e, std::span<const Index> seq);
/// Throws a validation error naming the offending link.
Chain validate_chain(const Entourage& e, Chain seq);
bool is_chain(const Entourage& e, std::span<const Index> seq);

Chain concat(const Chain& c, const Chain& d);
Chain reverse(Chain c);
/// Removes consecutive repeated vertices.
Chain collapse_duplicates(Chain c);

struct Move {
  enum class Op { insert, erase };
  Op op;
  std::size_t pos;
  Index vertex;  // inserted vertex, or the vertex removed by an erase

  static Move insert(std::size_t pos, Index v) { return {Op::insert, pos, v}; }
  static Move erase(std::size_t pos, Index removed) { return {Op::erase, pos, removed}; }
  Move inverse() const { return op == Op::insert ? erase(pos, vertex) : insert(pos, vertex); }
  bool operator==(const Move&) const = default;
};

/// Applies m in place; throws ErrorKind::certificate when the move is illegal.
void apply_move(const Entourage& e, Chain& c, const Move& m);

/// Moves taking `start` to `target` (compared up to repeated vertices),
/// legal at `entourage`.
struct HomotopyCertificate {
  Entourage entourage;
  Chain start;
  Chain target;
  std::vector<Move> moves;
};

struct ReplayResult {
  bool ok = false;
  std::optional<std::size_t> failed_move;
  std::string message;
  Chain final_chain;
};

ReplayResult replay(const HomotopyCertificate& cert);

Json certificate_to_json(const HomotopyCertificate& cert);
HomotopyCertificate certificate_from_json(const Json& j);

enum class Verdict { yes = 0, no = 1, unknown = 2 };
const char* to_string(Verdict v);

struct SearchBudget {
  std::size_t max_states = 50000;
  std::size_t max_length = 0;  // 0 selects 4·n
};

struct HomotopyDecision {
  Verdict verdict = Verdict::unknown;
  std::optional<HomotopyCertificate> certificate;  // yes
  IntVector obstruction;                           // no: nonzero class of c·d⁻¹
  bool endpoint_obstruction = false;               // no: endpoints unrelated
  std::size_t states_expanded = 0;
  std::size_t max_length = 0;
  std::string note;
};

/// Rel-endpoint homotopy at e. `hom`, when given, must be the homology of e
/// and saves recomputing it. Throws on endpoint mismatch.
HomotopyDecision decide_homotopic(const Entourage& e, const Chain& c, const Chain& d, const SearchBudget& budget = {},
                                  const Homology* hom = nullptr);

/// Endpoint-relaxed homotopy: c against e(x_c,x_d)·d·e(y_d,y_c).
HomotopyDecision e_homotopic(const Entourage& e, const Chain& c, const Chain& d, const SearchBudget& budget = {},
                             const Homology* hom = nullptr);

/// c is homotopic at f to the single edge between its endpoints.
HomotopyDecision is_short(const Entourage& f, const Chain& c, const SearchBudget& budget = {},
                          const Homology* hom = nullptr);

/// For pointwise e-close chains of equal length with common endpoints, an
/// explicit certificate at e∘e taking c to d through the interleaved chain.
HomotopyCertificate close_chains_certificate(const Entourage& e, const Chain& c, const Chain& d);

/// Greedy length reduction by legal moves (deletions and cone rewrites).
/// Appends the moves used to `moves` and returns the reduced chain.
Chain reduce_chain(const Entourage& e, Chain c, std::vector<Move>& moves);

Json decision_to_json(const HomotopyDecision& d);

}  // namespace ucov
