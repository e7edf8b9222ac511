#include "space.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <deque>
#include <limits>

namespace ucov {

namespace {

std::vector<double> euclidean(const std::vector<std::vector<double>>& coords) {
  const std::size_t n = coords.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < coords[i].size(); ++k) {
        const double d = coords[i][k] - coords[j][k];
        s += d * d;
      }
      dist[i * n + j] = dist[j * n + i] = std::sqrt(s);
    }
  }
  return dist;
}

void check_labels(const std::vector<std::string>& labels) {
  std::vector<std::string> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end()) fail(ErrorKind::validation, "duplicate label '" + *dup + "'");
}

}  // namespace

FiniteSpace FiniteSpace::from_coords(std::vector<std::string> labels,
                                     std::vector<std::vector<double>> coords) {
  if (labels.size() != coords.size())
    fail(ErrorKind::validation, "label count does not match coordinate rows");
  if (labels.empty()) fail(ErrorKind::validation, "space has no points");
  const std::size_t dim = coords.front().size();
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].size() != dim)
      fail(ErrorKind::validation, "row " + std::to_string(i) + " has dimension " +
                                      std::to_string(coords[i].size()) + ", expected " +
                                      std::to_string(dim));
    for (double c : coords[i])
      if (!std::isfinite(c)) fail(ErrorKind::validation, "non-finite coordinate in row " + std::to_string(i));
  }
  check_labels(labels);
  FiniteSpace s;
  s.labels_ = std::move(labels);
  s.dist_ = euclidean(coords);
  s.coords_ = std::move(coords);
  return s;
}

FiniteSpace FiniteSpace::from_matrix(std::vector<std::string> labels, std::vector<double> dist) {
  const std::size_t n = labels.size();
  if (n == 0) fail(ErrorKind::validation, "space has no points");
  if (dist.size() != n * n) fail(ErrorKind::validation, "distance matrix is not square in the label count");
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i * n + i] != 0.0)
      fail(ErrorKind::validation, "nonzero diagonal entry at " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      const double a = dist[i * n + j];
      if (!std::isfinite(a) || a < 0.0)
        fail(ErrorKind::validation, "negative or non-finite entry at (" + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
      const double b = dist[j * n + i];
      if (std::abs(a - b) > 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}))
        fail(ErrorKind::validation, "asymmetric entry at (" + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
    }
  }
  check_labels(labels);
  // Average the two triangles so the stored matrix is exactly symmetric.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (dist[i * n + j] + dist[j * n + i]);
      dist[i * n + j] = dist[j * n + i] = m;
    }
  FiniteSpace s;
  s.labels_ = std::move(labels);
  s.dist_ = std::move(dist);
  return s;
}

std::optional<Index> FiniteSpace::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Index>(it - labels_.begin());
}

Index FiniteSpace::resolve(const std::string& token) const {
  if (auto i = index_of(token)) return *i;
  Index v = 0;
  auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec == std::errc() && p == token.data() + token.size() && v < size()) return v;
  fail(ErrorKind::argument, "unknown point '" + token + "'");
}

void FiniteSpace::set_distinguished(std::vector<std::pair<std::string, Index>> d) {
  for (const auto& [name, idx] : d)
    if (idx >= size()) fail(ErrorKind::validation, "distinguished point '" + name + "' out of range");
  distinguished_ = std::move(d);
}

double FiniteSpace::diameter() const {
  double m = 0.0;
  for (double d : dist_) m = std::max(m, d);
  return m;
}

// ---------------------------------------------------------------------------

Entourage::Entourage(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {
  for (Index i = 0; i < n; ++i) set(i, i);
}

Entourage Entourage::complete(std::size_t n) {
  Entourage e(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) e.set(i, j);
  return e;
}

Entourage Entourage::from_pairs(std::size_t n, std::span<const IndexPair> pairs) {
  Entourage e(n);
  for (auto [i, j] : pairs) {
    if (i >= n || j >= n) fail(ErrorKind::validation, "pair index out of range");
    e.relate(i, j);
  }
  return e;
}

bool Entourage::is_symmetric() const {
  for (Index i = 0; i < n_; ++i)
    for (Index j = i + 1; j < n_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

bool Entourage::is_reflexive() const {
  for (Index i = 0; i < n_; ++i)
    if (!(*this)(i, i)) return false;
  return true;
}

bool Entourage::subset_of(const Entourage& other) const {
  require_same_carrier(*this, other, "subset_of");
  for (std::size_t k = 0; k < bits_.size(); ++k)
    if (bits_[k] & ~other.bits_[k]) return false;
  return true;
}

Entourage Entourage::intersect(const Entourage& other) const {
  require_same_carrier(*this, other, "intersect");
  Entourage r = *this;
  for (std::size_t k = 0; k < bits_.size(); ++k) r.bits_[k] &= other.bits_[k];
  return r;
}

Entourage Entourage::symmetrized() const {
  Entourage r = *this;
  for (Index i = 0; i < n_; ++i)
    for (Index j = 0; j < n_; ++j)
      if ((*this)(i, j)) r.set(j, i);
  return r;
}

std::vector<Index> Entourage::ball(Index x) const {
  if (x >= n_) fail(ErrorKind::argument, "ball: index " + std::to_string(x) + " out of range");
  std::vector<Index> out;
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t bits = bits_[x * words_ + w];
    while (bits) {
      out.push_back(w * 64 + static_cast<Index>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

std::size_t Entourage::degree(Index x) const {
  std::size_t d = 0;
  for (std::size_t w = 0; w < words_; ++w) d += std::popcount(bits_[x * words_ + w]);
  return d;
}

std::vector<IndexPair> Entourage::edges() const {
  std::vector<IndexPair> out;
  for (Index i = 0; i < n_; ++i)
    for (Index j : ball(i))
      if (j > i) out.emplace_back(i, j);
  return out;
}

std::size_t Entourage::pair_count() const {
  std::size_t c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

void require_same_carrier(const Entourage& a, const Entourage& b, const char* op) {
  if (a.size() != b.size())
    fail(ErrorKind::argument, std::string(op) + ": carrier mismatch (" + std::to_string(a.size()) +
                                  " vs " + std::to_string(b.size()) + ")");
}

bool within(double d, double eps, Comparison cmp) {
  if (cmp == Comparison::closed) return d <= eps * (1.0 + kThresholdSlack) + 1e-15;
  return d < eps * (1.0 - kThresholdSlack);
}

Entourage entourage_at(const FiniteSpace& space, double eps, Comparison cmp) {
  if (!(eps >= 0.0)) fail(ErrorKind::argument, "threshold must be nonnegative");
  const std::size_t n = space.size();
  Entourage e(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (within(space.dist(i, j), eps, cmp)) e.relate(i, j);
  return e;
}

Entourage compose(const Entourage& e, const Entourage& f) {
  require_same_carrier(e, f, "compose");
  const std::size_t n = e.size();
  Entourage r(n);
  std::vector<std::uint64_t> acc(e.words());
  for (Index i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (Index j : e.ball(i)) {
      auto row = f.row(j);
      for (std::size_t w = 0; w < acc.size(); ++w) acc[w] |= row[w];
    }
    for (std::size_t w = 0; w < acc.size(); ++w) {
      std::uint64_t bits = acc[w];
      while (bits) {
        r.set(i, w * 64 + static_cast<Index>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }
  return r;
}

Entourage power(const Entourage& e, unsigned k) {
  Entourage r = Entourage::identity(e.size());
  for (unsigned i = 0; i < k; ++i) r = compose(r, e);
  return r;
}

std::vector<Index> ball(const Entourage& e, Index x) { return e.ball(x); }

std::vector<Index> components(const Entourage& e) {
  const std::size_t n = e.size();
  constexpr Index unseen = std::numeric_limits<Index>::max();
  std::vector<Index> comp(n, unseen);
  for (Index root = 0; root < n; ++root) {
    if (comp[root] != unseen) continue;
    comp[root] = root;
    std::deque<Index> queue{root};
    while (!queue.empty()) {
      Index u = queue.front();
      queue.pop_front();
      for (Index v : e.ball(u))
        if (comp[v] == unseen) {
          comp[v] = root;
          queue.push_back(v);
        }
    }
  }
  return comp;
}

bool is_chain_connected(const Entourage& e) {
  auto comp = components(e);
  return std::all_of(comp.begin(), comp.end(), [](Index c) { return c == 0; });
}

// ---------------------------------------------------------------------------

SpaceMap::SpaceMap(std::shared_ptr<const FiniteSpace> source,
                   std::shared_ptr<const FiniteSpace> target, std::vector<Index> assign)
    : source_(std::move(source)), target_(std::move(target)), assign_(std::move(assign)) {
  if (!source_ || !target_) fail(ErrorKind::argument, "map needs a source and a target");
  if (assign_.size() != source_->size())
    fail(ErrorKind::validation, "assignment is not total: " + std::to_string(assign_.size()) +
                                    " entries for " + std::to_string(source_->size()) + " points");
  for (Index a : assign_)
    if (a >= target_->size())
      fail(ErrorKind::validation, "assignment target " + std::to_string(a) + " out of range");
}

bool SpaceMap::is_surjective() const {
  std::vector<bool> hit(target_->size(), false);
  for (Index a : assign_) hit[a] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

bool SpaceMap::is_injective() const {
  std::vector<bool> hit(target_->size(), false);
  for (Index a : assign_) {
    if (hit[a]) return false;
    hit[a] = true;
  }
  return true;
}

std::vector<std::vector<Index>> SpaceMap::fibers() const {
  std::vector<std::vector<Index>> out(target_->size());
  for (Index x = 0; x < assign_.size(); ++x) out[assign_[x]].push_back(x);
  return out;
}

Image image_under(const SpaceMap& f, const Entourage& e) {
  if (e.size() != f.source().size()) fail(ErrorKind::argument, "image_under: carrier mismatch");
  Image img{Entourage(f.target().size()), std::vector<bool>(f.target().size(), false)};
  for (Index i = 0; i < e.size(); ++i) {
    img.in_image[f(i)] = true;
    for (Index j : e.ball(i)) img.relation.set(f(i), f(j));
  }
  return img;
}

ScaleLadder ScaleLadder::from_thresholds(const FiniteSpace& space, std::vector<double> thresholds,
                                         Comparison cmp) {
  if (thresholds.empty()) fail(ErrorKind::validation, "ladder is empty");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] >= 0.0)) fail(ErrorKind::validation, "ladder thresholds must be nonnegative");
    if (i > 0 && !(thresholds[i] < thresholds[i - 1]))
      fail(ErrorKind::validation, "ladder thresholds must be strictly decreasing");
  }
  ScaleLadder l;
  for (double t : thresholds) l.scales_.push_back(entourage_at(space, t, cmp));
  l.thresholds_ = std::move(thresholds);
  return l;
}

ScaleLadder ScaleLadder::from_entourages(std::vector<Entourage> scales) {
  if (scales.empty()) fail(ErrorKind::validation, "ladder is empty");
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (!scales[i].subset_of(scales[i - 1]))
      fail(ErrorKind::validation, "ladder entourage " + std::to_string(i) + " is not contained in its predecessor");
  ScaleLadder l;
  l.scales_ = std::move(scales);
  return l;
}

}  // namespace ucov
