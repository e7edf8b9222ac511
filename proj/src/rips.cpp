#include "rips.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <set>

namespace ucov {

RipsSkeleton::RipsSkeleton(const FiniteSpace& space, Entourage e) : entourage_(std::move(e)) {
  if (space.size() != entourage_.size())
    fail(ErrorKind::argument, "build_skeleton: carrier mismatch (" + std::to_string(space.size()) + " points, entourage on " +
                                  std::to_string(entourage_.size()) + ")");
  build();
}

RipsSkeleton::RipsSkeleton(Entourage e) : entourage_(std::move(e)) { build(); }

void RipsSkeleton::build() {
  if (!entourage_.is_symmetric() || !entourage_.is_reflexive())
    fail(ErrorKind::argument, "Rips complex needs a symmetric reflexive relation");
  const std::size_t n = size();
  edges_ = entourage_.edges();

  // Triangles i<j<k: common neighbours of an edge beyond j.
  std::vector<std::uint64_t> common(entourage_.words());
  for (auto [i, j] : edges_) {
    auto ri = entourage_.row(i), rj = entourage_.row(j);
    for (std::size_t w = 0; w < common.size(); ++w) common[w] = ri[w] & rj[w];
    for (std::size_t w = (j + 1) / 64; w < common.size(); ++w) {
      std::uint64_t bits = common[w];
      if (w == (j + 1) / 64) bits &= ~std::uint64_t{0} << ((j + 1) % 64);
      while (bits) {
        triangles_.push_back({i, j, w * 64 + static_cast<Index>(std::countr_zero(bits))});
        bits &= bits - 1;
      }
    }
  }

  constexpr Index unseen = static_cast<Index>(-1);
  parent_.assign(n, unseen);
  component_.assign(n, unseen);
  for (Index root = 0; root < n; ++root) {
    if (parent_[root] != unseen) continue;
    roots_.push_back(root);
    parent_[root] = root;
    component_[root] = root;
    std::deque<Index> queue{root};
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop_front();
      for (Index v : entourage_.ball(u))
        if (parent_[v] == unseen) {
          parent_[v] = u;
          component_[v] = root;
          queue.push_back(v);
        }
    }
  }

  generator_of_.assign(n * n, -1);
  for (auto [i, j] : edges_) {
    if (parent_[i] == j || parent_[j] == i) continue;
    generator_of_[i * n + j] = static_cast<std::int32_t>(generators_.size());
    generators_.emplace_back(i, j);
  }
}

bool RipsSkeleton::is_forest_edge(Index u, Index v) const {
  return u != v && (parent_[u] == v || parent_[v] == u);
}

std::int64_t RipsSkeleton::signed_generator(Index u, Index v) const {
  if (u >= size() || v >= size()) fail(ErrorKind::argument, "vertex out of range");
  if (!entourage_(u, v))
    fail(ErrorKind::argument, "link (" + std::to_string(u) + "," + std::to_string(v) + ") is not in the entourage");
  if (u == v) return 0;
  const std::size_t n = size();
  if (u < v) {
    const auto g = generator_of_[u * n + v];
    return g < 0 ? 0 : g + 1;
  }
  const auto g = generator_of_[v * n + u];
  return g < 0 ? 0 : -(g + 1);
}

std::vector<Index> RipsSkeleton::path_to_root(Index x) const {
  std::vector<Index> p{x};
  while (parent_[p.back()] != p.back()) p.push_back(parent_[p.back()]);
  return p;
}

Presentation edge_path_presentation(const RipsSkeleton& skel, Index basepoint) {
  if (basepoint >= skel.size()) fail(ErrorKind::argument, "basepoint out of range");
  Presentation p{basepoint, skel.generators(), {}};
  for (const auto& t : skel.triangles()) {
    Word w;
    for (auto [u, v] : {IndexPair{t[0], t[1]}, IndexPair{t[1], t[2]}, IndexPair{t[2], t[0]}}) {
      const auto g = skel.signed_generator(u, v);
      if (g != 0) w.push_back({static_cast<std::size_t>(std::abs(g) - 1), g > 0 ? 1 : -1});
    }
    p.relators.push_back(std::move(w));
  }
  return p;
}

// ---------------------------------------------------------------------------

namespace {

void add_scaled(EdgeVector& acc, const EdgeVector& x, const Integer& c) {
  for (const auto& [g, a] : x) {
    auto [it, inserted] = acc.try_emplace(g, 0);
    it->second += c * a;
    if (sgn(it->second) == 0) acc.erase(it);
  }
}

}  // namespace

Homology::Homology(std::shared_ptr<const RipsSkeleton> skel) : skel_(std::move(skel)) {
  const std::size_t m = skel_->generators().size();
  pivot_expr_.assign(m, {});
  is_pivot_.assign(m, false);
  std::vector<std::set<std::size_t>> users(m);
  std::vector<EdgeVector> leftover;

  auto reduce = [&](EdgeVector row) {
    EdgeVector out;
    for (const auto& [g, c] : row) {
      if (is_pivot_[g]) {
        add_scaled(out, pivot_expr_[g], c);
      } else {
        auto [it, ins] = out.try_emplace(g, 0);
        it->second += c;
        if (sgn(it->second) == 0) out.erase(it);
      }
    }
    return out;
  };

  for (const auto& t : skel_->triangles()) {
    EdgeVector row;
    for (auto [u, v] : {IndexPair{t[0], t[1]}, IndexPair{t[1], t[2]}, IndexPair{t[2], t[0]}}) {
      const auto g = skel_->signed_generator(u, v);
      if (g == 0) continue;
      row[static_cast<std::size_t>(std::abs(g) - 1)] += g > 0 ? 1 : -1;
    }
    std::erase_if(row, [](const auto& kv) { return sgn(kv.second) == 0; });
    row = reduce(std::move(row));
    if (row.empty()) continue;

    // Unit pivot with the fewest dependants keeps fill-in low.
    std::size_t best = m;
    for (const auto& [g, c] : row)
      if (mpz_cmpabs_ui(c.get_mpz_t(), 1) == 0 && (best == m || users[g].size() < users[best].size())) best = g;
    if (best == m) {
      leftover.push_back(std::move(row));
      continue;
    }
    const Integer c = row.at(best);
    row.erase(best);
    // c*g + rest = 0 with c = ±1  =>  g = -c * rest
    EdgeVector expr;
    for (auto& [h, a] : row) expr.emplace(h, -c * a);
    for (const auto& [h, a] : expr) users[h].insert(best);

    for (std::size_t p : users[best]) {
      EdgeVector& e = pivot_expr_[p];
      auto it = e.find(best);
      if (it == e.end()) continue;
      const Integer k = it->second;
      e.erase(it);
      for (const auto& [h, a] : expr) {
        auto [jt, ins] = e.try_emplace(h, 0);
        jt->second += k * a;
        if (sgn(jt->second) == 0) {
          e.erase(jt);
          users[h].erase(p);
        } else {
          users[h].insert(p);
        }
      }
    }
    users[best].clear();
    pivot_expr_[best] = std::move(expr);
    is_pivot_[best] = true;
  }

  free_index_.assign(m, static_cast<std::size_t>(-1));
  for (std::size_t g = 0; g < m; ++g)
    if (!is_pivot_[g]) {
      free_index_[g] = free_generators_.size();
      free_generators_.push_back(g);
    }
  const std::size_t q = free_generators_.size();

  std::vector<EdgeVector> residual;
  for (auto& row : leftover) {
    auto r = reduce(std::move(row));
    if (!r.empty()) residual.push_back(std::move(r));
  }
  IntMatrix mat(residual.size(), q);
  for (std::size_t i = 0; i < residual.size(); ++i)
    for (const auto& [g, c] : residual[i]) mat(i, free_index_[g]) = c;
  smith_ = smith_normal_form(std::move(mat));

  const std::size_t r = smith_.nonzero;
  group_.rank = q - r;
  for (std::size_t j = r; j < q; ++j) coord_column_.push_back(j);
  for (std::size_t i = 0; i < r; ++i)
    if (smith_.diagonal[i] != 1) {
      group_.torsion.push_back(smith_.diagonal[i]);
      coord_column_.push_back(i);
    }
}

IntVector Homology::coordinates(const EdgeVector& x) const {
  const std::size_t q = free_generators_.size();
  IntVector y0(q);
  for (const auto& [g, c] : x) {
    if (is_pivot_[g]) {
      for (const auto& [h, a] : pivot_expr_[g]) y0[free_index_[h]] += c * a;
    } else {
      y0[free_index_[g]] += c;
    }
  }
  IntVector out(coord_column_.size());
  for (std::size_t k = 0; k < coord_column_.size(); ++k) {
    const std::size_t col = coord_column_[k];
    for (std::size_t i = 0; i < q; ++i)
      if (sgn(y0[i]) != 0) out[k] += y0[i] * smith_.right(i, col);
  }
  return normalize(std::move(out));
}

IntVector Homology::sequence_coordinates(std::span<const Index> seq) const {
  EdgeVector ev;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const auto g = skel_->signed_generator(seq[i], seq[i + 1]);
    if (g == 0) continue;
    auto [it, ins] = ev.try_emplace(static_cast<std::size_t>(std::abs(g) - 1), 0);
    it->second += g > 0 ? 1 : -1;
    if (sgn(it->second) == 0) ev.erase(it);
  }
  return coordinates(ev);
}

IntVector Homology::link_coordinates(Index u, Index v) const {
  const std::array<Index, 2> s{u, v};
  return sequence_coordinates(s);
}

IntVector Homology::normalize(IntVector c) const {
  for (std::size_t t = 0; t < group_.torsion.size(); ++t) {
    Integer& x = c[group_.rank + t];
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), group_.torsion[t].get_mpz_t());
  }
  return c;
}

IntVector Homology::add(const IntVector& a, const IntVector& b) const {
  IntVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return normalize(std::move(c));
}

IntVector Homology::negate(const IntVector& a) const {
  IntVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = -a[i];
  return normalize(std::move(c));
}

bool Homology::is_zero(const IntVector& c) {
  return std::all_of(c.begin(), c.end(), [](const Integer& x) { return sgn(x) == 0; });
}

EdgeVector Homology::representative(std::size_t k) const {
  const std::size_t col = coord_column_.at(k);
  EdgeVector ev;
  for (std::size_t i = 0; i < free_generators_.size(); ++i) {
    const Integer& a = smith_.right_inverse(col, i);
    if (sgn(a) != 0) ev.emplace(free_generators_[i], a);
  }
  return ev;
}

std::vector<IntVector> Homology::torsion_relations() const {
  std::vector<IntVector> rel;
  const std::size_t dim = group_.coordinate_count();
  for (std::size_t t = 0; t < group_.torsion.size(); ++t) {
    IntVector v(dim);
    v[group_.rank + t] = group_.torsion[t];
    rel.push_back(std::move(v));
  }
  return rel;
}

AbelianGroup h1(const RipsSkeleton& skel) {
  return Homology(std::make_shared<const RipsSkeleton>(skel)).group();
}

IntVector h1_class(const RipsSkeleton& skel, std::span<const Index> loop) {
  if (loop.empty()) fail(ErrorKind::argument, "h1_class: empty chain");
  if (loop.front() != loop.back()) fail(ErrorKind::argument, "h1_class: chain is not closed");
  for (std::size_t i = 0; i + 1 < loop.size(); ++i)
    if (loop[i] >= skel.size() || loop[i + 1] >= skel.size() || !skel.entourage()(loop[i], loop[i + 1]))
      fail(ErrorKind::argument, "h1_class: invalid link at position " + std::to_string(i));
  return Homology(std::make_shared<const RipsSkeleton>(skel)).sequence_coordinates(loop);
}

H1Map inclusion_h1_map(const Homology& fine, const Homology& coarse) {
  const RipsSkeleton& fs = fine.skeleton();
  const RipsSkeleton& cs = coarse.skeleton();
  if (fs.size() != cs.size()) fail(ErrorKind::argument, "inclusion_h1_map: carrier mismatch");
  if (!fs.entourage().subset_of(cs.entourage()))
    fail(ErrorKind::argument, "inclusion_h1_map: fine entourage is not contained in the coarse one");

  std::map<std::size_t, EdgeVector> pushed;  // fine generator -> coarse edge vector of its cycle
  auto push = [&](std::size_t g) -> const EdgeVector& {
    auto it = pushed.find(g);
    if (it != pushed.end()) return it->second;
    auto [u, v] = fs.generators()[g];
    auto up = fs.path_to_root(u);
    std::vector<Index> cycle(up.rbegin(), up.rend());
    auto down = fs.path_to_root(v);
    cycle.insert(cycle.end(), down.begin(), down.end());
    EdgeVector ev;
    for (std::size_t i = 0; i + 1 < cycle.size(); ++i) {
      const auto s = cs.signed_generator(cycle[i], cycle[i + 1]);
      if (s == 0) continue;
      auto [jt, ins] = ev.try_emplace(static_cast<std::size_t>(std::abs(s) - 1), 0);
      jt->second += s > 0 ? 1 : -1;
      if (sgn(jt->second) == 0) ev.erase(jt);
    }
    return pushed.emplace(g, std::move(ev)).first->second;
  };

  H1Map map{fine.group(), coarse.group(),
            IntMatrix(coarse.group().coordinate_count(), fine.group().coordinate_count())};
  for (std::size_t k = 0; k < fine.group().coordinate_count(); ++k) {
    EdgeVector acc;
    for (const auto& [g, c] : fine.representative(k)) add_scaled(acc, push(g), c);
    const IntVector col = coarse.coordinates(acc);
    for (std::size_t i = 0; i < col.size(); ++i) map.matrix(i, k) = col[i];
  }
  return map;
}

Lattice image_lattice(const H1Map& map, const Homology& codomain) {
  std::vector<IntVector> gens = codomain.torsion_relations();
  for (std::size_t k = 0; k < map.matrix.cols(); ++k) gens.push_back(map.matrix.col(k));
  return Lattice(codomain.group().coordinate_count(), gens);
}

}  // namespace ucov
