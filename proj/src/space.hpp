#pragma once

// Finite dissimilarity spaces, entourages (reflexive bit-relations), maps
// between finite spaces and scale ladders.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace ucov {

using Index = std::size_t;
using IndexPair = std::pair<Index, Index>;

/// Relative slack applied to threshold comparisons so that distances which
/// are equal in exact geometry (hexagon sides, circumradii) compare equal
/// after floating-point evaluation.
inline constexpr double kThresholdSlack = 1e-9;

enum class Comparison { closed, strict };

class FiniteSpace {
 public:
  FiniteSpace() = default;

  static FiniteSpace from_coords(std::vector<std::string> labels,
                                 std::vector<std::vector<double>> coords);
  static FiniteSpace from_matrix(std::vector<std::string> labels,
                                 std::vector<double> dist);

  std::size_t size() const noexcept { return labels_.size(); }
  double dist(Index i, Index j) const { return dist_[i * size() + j]; }
  const std::vector<double>& dist_matrix() const noexcept { return dist_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::optional<std::vector<std::vector<double>>>& coords() const noexcept {
    return coords_;
  }

  std::optional<Index> index_of(const std::string& label) const;
  /// Accepts a label or a decimal index.
  Index resolve(const std::string& label_or_index) const;

  const std::vector<std::pair<std::string, Index>>& distinguished() const noexcept {
    return distinguished_;
  }
  void set_distinguished(std::vector<std::pair<std::string, Index>> d);

  const std::vector<double>& recommended_ladder() const noexcept { return ladder_; }
  void set_recommended_ladder(std::vector<double> thresholds) { ladder_ = std::move(thresholds); }

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  double diameter() const;

  bool operator==(const FiniteSpace&) const = default;

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::optional<std::vector<std::vector<double>>> coords_;
  std::vector<double> dist_;
  std::vector<std::pair<std::string, Index>> distinguished_;
  std::vector<double> ladder_;
};

/// Reflexive relation on {0..n-1} stored as a dense bit matrix. Relations
/// produced from metrics, pair lists and images are symmetric; a raw
/// composition E∘F is symmetric whenever E and F commute.
class Entourage {
 public:
  Entourage() = default;
  explicit Entourage(std::size_t n);

  static Entourage identity(std::size_t n) { return Entourage(n); }
  static Entourage complete(std::size_t n);
  static Entourage from_pairs(std::size_t n, std::span<const IndexPair> pairs);

  std::size_t size() const noexcept { return n_; }
  bool operator()(Index i, Index j) const noexcept {
    return (bits_[i * words_ + (j >> 6)] >> (j & 63)) & 1u;
  }
  /// Adds (i,j) and (j,i).
  void relate(Index i, Index j) noexcept {
    set(i, j);
    set(j, i);
  }
  void set(Index i, Index j) noexcept { bits_[i * words_ + (j >> 6)] |= std::uint64_t{1} << (j & 63); }

  std::span<const std::uint64_t> row(Index i) const noexcept {
    return {bits_.data() + i * words_, words_};
  }
  std::size_t words() const noexcept { return words_; }

  bool is_symmetric() const;
  bool is_reflexive() const;
  bool subset_of(const Entourage& other) const;
  Entourage intersect(const Entourage& other) const;
  Entourage symmetrized() const;

  std::vector<Index> ball(Index x) const;
  std::size_t degree(Index x) const;
  /// Off-diagonal pairs (i<j).
  std::vector<IndexPair> edges() const;
  std::size_t pair_count() const;

  bool operator==(const Entourage&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

void require_same_carrier(const Entourage& a, const Entourage& b, const char* op);

Entourage entourage_at(const FiniteSpace& space, double eps,
                       Comparison cmp = Comparison::closed);
bool within(double d, double eps, Comparison cmp);

/// Raw relational composition: (i,k) related iff some j has E(i,j), F(j,k).
Entourage compose(const Entourage& e, const Entourage& f);
Entourage power(const Entourage& e, unsigned k);

std::vector<Index> ball(const Entourage& e, Index x);
bool is_chain_connected(const Entourage& e);
/// Component id per point (components numbered by lowest member).
std::vector<Index> components(const Entourage& e);

class SpaceMap {
 public:
  SpaceMap(std::shared_ptr<const FiniteSpace> source,
           std::shared_ptr<const FiniteSpace> target, std::vector<Index> assign);

  const FiniteSpace& source() const noexcept { return *source_; }
  const FiniteSpace& target() const noexcept { return *target_; }
  const std::shared_ptr<const FiniteSpace>& source_ptr() const noexcept { return source_; }
  const std::shared_ptr<const FiniteSpace>& target_ptr() const noexcept { return target_; }
  Index operator()(Index x) const { return assign_[x]; }
  const std::vector<Index>& assign() const noexcept { return assign_; }

  bool is_surjective() const;
  bool is_injective() const;
  std::vector<std::vector<Index>> fibers() const;

 private:
  std::shared_ptr<const FiniteSpace> source_;
  std::shared_ptr<const FiniteSpace> target_;
  std::vector<Index> assign_;
};

struct Image {
  Entourage relation;
  /// Target points hit by f; the remaining diagonal entries of `relation`
  /// were added only to keep it reflexive.
  std::vector<bool> in_image;
};

Image image_under(const SpaceMap& f, const Entourage& e);

/// Nested entourages, coarsest first. Thresholds are kept when the ladder
/// was built from a metric.
class ScaleLadder {
 public:
  static ScaleLadder from_thresholds(const FiniteSpace& space, std::vector<double> thresholds,
                                     Comparison cmp = Comparison::closed);
  static ScaleLadder from_entourages(std::vector<Entourage> scales);

  std::size_t size() const noexcept { return scales_.size(); }
  const Entourage& operator[](std::size_t i) const { return scales_[i]; }
  const std::vector<Entourage>& scales() const noexcept { return scales_; }
  const std::vector<double>& thresholds() const noexcept { return thresholds_; }
  const Entourage& finest() const { return scales_.back(); }

 private:
  std::vector<Entourage> scales_;
  std::vector<double> thresholds_;
};

}  // namespace ucov
