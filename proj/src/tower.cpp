#include "tower.hpp"

#include <deque>
#include <iomanip>
#include <map>
#include <sstream>

#include "parallel.hpp"

namespace ucov {

namespace {

Json matrix_to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(intvector_to_json(m.row(i)));
  return rows;
}

std::vector<Integer> snf_diagonal(const IntMatrix& m) {
  auto s = smith_normal_form(m);
  return {s.diagonal.begin(), s.diagonal.begin() + static_cast<std::ptrdiff_t>(s.nonzero)};
}

Json group_to_json(const AbelianGroup& g) {
  Json j;
  j["rank"] = g.rank;
  Json t = Json::array();
  for (const auto& d : g.torsion) t.push_back(integer_to_json(d));
  j["torsion"] = std::move(t);
  return j;
}

std::string group_string(const AbelianGroup& g) {
  if (g.is_trivial()) return "0";
  std::string s;
  for (std::size_t i = 0; i < g.rank; ++i) s += (s.empty() ? "" : "+") + std::string("Z");
  for (const auto& d : g.torsion) s += (s.empty() ? "" : "+") + ("Z/" + d.get_str());
  return s;
}

std::vector<std::shared_ptr<const Homology>> ladder_homology(const ScaleLadder& ladder, unsigned threads) {
  std::vector<std::shared_ptr<const Homology>> hom(ladder.size());
  parallel_for(ladder.size(), threads, [&](std::size_t i) {
    hom[i] = std::make_shared<const Homology>(std::make_shared<const RipsSkeleton>(ladder[i]));
  });
  return hom;
}

Lattice whole_group(const AbelianGroup& g) {
  const std::size_t dim = g.coordinate_count();
  std::vector<IntVector> gens;
  for (std::size_t i = 0; i < dim; ++i) {
    IntVector v(dim);
    v[i] = 1;
    gens.push_back(std::move(v));
  }
  return Lattice(dim, gens);
}

Json pair_labels(const FiniteSpace* space, Index x, Index y) {
  if (space) return Json::array({space->labels()[x], space->labels()[y]});
  return Json::array({x, y});
}

}  // namespace

IntMatrix normalize_rows(IntMatrix m, const AbelianGroup& codomain) {
  for (std::size_t t = 0; t < codomain.torsion.size(); ++t) {
    const std::size_t r = codomain.rank + t;
    for (std::size_t j = 0; j < m.cols(); ++j)
      mpz_fdiv_r(m(r, j).get_mpz_t(), m(r, j).get_mpz_t(), codomain.torsion[t].get_mpz_t());
  }
  return m;
}

TowerReport build_tower(const ScaleLadder& ladder, Index basepoint, unsigned threads) {
  if (ladder.size() < 2) fail(ErrorKind::argument, "build_tower: ladder needs at least two scales");
  if (basepoint >= ladder[0].size()) fail(ErrorKind::argument, "build_tower: basepoint out of range");
  TowerReport t;
  t.thresholds = ladder.thresholds();
  t.basepoint = basepoint;
  t.homology = ladder_homology(ladder, threads);
  const std::size_t k = ladder.size();
  for (const auto& h : t.homology) t.components.push_back(h->skeleton().component_count());

  t.bonding.resize(k - 1);
  parallel_for(k - 1, threads, [&](std::size_t i) {
    t.bonding[i] = inclusion_h1_map(*t.homology[i + 1], *t.homology[i]);
    t.bonding[i].matrix = normalize_rows(std::move(t.bonding[i].matrix), t.bonding[i].codomain);
  });

  t.maps.assign(k, std::vector<IntMatrix>(k));
  t.images.assign(k, std::vector<Lattice>(k));
  for (std::size_t a = 0; a + 1 < k; ++a) {
    const AbelianGroup& ga = t.homology[a]->group();
    for (std::size_t c = a + 1; c < k; ++c) {
      t.maps[a][c] = c == a + 1 ? t.bonding[a].matrix : normalize_rows(t.maps[a][c - 1] * t.bonding[c - 1].matrix, ga);
      H1Map m{t.homology[c]->group(), ga, t.maps[a][c]};
      t.images[a][c] = image_lattice(m, *t.homology[a]);
    }
  }
  t.ml.resize(k);
  t.trivial.resize(k);
  for (std::size_t a = 0; a + 1 < k; ++a) {
    t.ml[a] = ml_diagnostic(t, a);
    t.trivial[a] = triviality_diagnostic(t, a);
  }
  return t;
}

StabilizationResult ml_diagnostic(const TowerReport& t, std::size_t a) {
  const std::size_t k = t.size();
  if (a + 1 >= k) fail(ErrorKind::argument, "ml_diagnostic: index " + std::to_string(a) + " has no finer scale");
  const Lattice full = whole_group(t.homology[a]->group());
  auto image = [&](std::size_t c) -> const Lattice& { return c == a ? full : t.images[a][c]; };
  const std::size_t last = k - 1;
  std::size_t j = last;
  while (j > a && image(j - 1) == image(last)) --j;
  if (j == last) return {};
  return {true, std::max(j, a + 1)};
}

StabilizationResult triviality_diagnostic(const TowerReport& t, std::size_t a) {
  const std::size_t k = t.size();
  if (a + 1 >= k) fail(ErrorKind::argument, "triviality_diagnostic: index " + std::to_string(a) + " has no finer scale");
  const Lattice zero(t.homology[a]->group().coordinate_count(), t.homology[a]->torsion_relations());
  for (std::size_t b = a + 1; b < k; ++b)
    if (t.images[a][b] == zero) return {true, b};
  return {};
}

Json tower_to_json(const TowerReport& t) {
  Json j;
  Json scales = Json::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    Json s;
    s["index"] = i;
    if (i < t.thresholds.size()) s["threshold"] = t.thresholds[i];
    s["components"] = t.components[i];
    s["edges"] = t.homology[i]->skeleton().edges().size();
    s["triangles"] = t.homology[i]->skeleton().triangles().size();
    s["h1"] = group_to_json(t.homology[i]->group());
    scales.push_back(std::move(s));
  }
  j["scales"] = std::move(scales);
  Json bonding = Json::array();
  for (std::size_t i = 0; i < t.bonding.size(); ++i) {
    Json b;
    b["from"] = i + 1;
    b["to"] = i;
    b["matrix"] = matrix_to_json(t.bonding[i].matrix);
    b["snf"] = intvector_to_json(snf_diagonal(t.bonding[i].matrix));
    bonding.push_back(std::move(b));
  }
  j["bonding"] = std::move(bonding);
  Json images = Json::array();
  for (std::size_t a = 0; a + 1 < t.size(); ++a)
    for (std::size_t c = a + 1; c < t.size(); ++c) {
      Json im;
      im["coarse"] = a;
      im["fine"] = c;
      im["matrix"] = matrix_to_json(t.maps[a][c]);
      Json basis = Json::array();
      for (const auto& b : t.images[a][c].basis()) basis.push_back(intvector_to_json(b));
      im["image_basis"] = std::move(basis);
      images.push_back(std::move(im));
    }
  j["images"] = std::move(images);
  Json diag = Json::array();
  for (std::size_t a = 0; a + 1 < t.size(); ++a) {
    Json d;
    d["index"] = a;
    d["ml"] = t.ml[a].found ? Json{{"stabilized_at", t.ml[a].at}} : Json("not_stabilized_within_ladder");
    d["trivial"] = t.trivial[a].found ? Json{{"trivial_at", t.trivial[a].at}} : Json("not_within_ladder");
    diag.push_back(std::move(d));
  }
  j["diagnostics"] = std::move(diag);
  j["caveat"] = "image stabilization is observed only within the finite ladder; it is necessary but not sufficient "
                "for the Mittag-Leffler condition of the full tower";
  return j;
}

std::string tower_table(const TowerReport& t) {
  std::ostringstream out;
  out << std::left << std::setw(6) << "scale" << std::setw(12) << "threshold" << std::setw(6) << "comp"
      << std::setw(14) << "H1" << std::setw(14) << "bonding SNF" << "diagnostics\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::ostringstream thr, snf, diag;
    if (i < t.thresholds.size()) thr << t.thresholds[i];
    if (i + 1 < t.size()) {
      snf << "[";
      const auto d = snf_diagonal(t.bonding[i].matrix);
      for (std::size_t k = 0; k < d.size(); ++k) snf << (k ? "," : "") << d[k].get_str();
      snf << "]";
      diag << (t.ml[i].found ? "ML@" + std::to_string(t.ml[i].at) : std::string("ML:no"));
      diag << " " << (t.trivial[i].found ? "triv@" + std::to_string(t.trivial[i].at) : std::string("triv:no"));
    }
    out << std::setw(6) << i << std::setw(12) << thr.str() << std::setw(6) << t.components[i] << std::setw(14)
        << group_string(t.homology[i]->group()) << std::setw(14) << snf.str() << diag.str() << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------

JoinContext::JoinContext(std::shared_ptr<const Homology> target, std::shared_ptr<const Homology> fine)
    : target_(std::move(target)), fine_(std::move(fine)) {
  if (!fine_relation().subset_of(target_relation()))
    fail(ErrorKind::argument, "fine scale is not contained in the target scale");
  image_ = image_lattice(inclusion_h1_map(*fine_, *target_), *target_);
}

std::optional<Chain> JoinContext::fine_path(Index x, Index y) const {
  const auto& skel = fine_->skeleton();
  if (skel.component()[x] != skel.component()[y]) return std::nullopt;
  auto ux = skel.path_to_root(x), uy = skel.path_to_root(y);
  while (ux.size() > 1 && uy.size() > 1 && ux[ux.size() - 2] == uy[uy.size() - 2]) {
    ux.pop_back();
    uy.pop_back();
  }
  Chain c = ux;
  c.insert(c.end(), uy.rbegin() + 1, uy.rend());
  return c;
}

std::optional<Chain> JoinContext::class_search(Index x, Index y, const IntVector& goal_big, const JoinBudget& budget,
                                               std::size_t& states, bool& pruned) const {
  const AbelianGroup& g = target_->group();
  const std::size_t dim = g.coordinate_count();
  std::vector<long> mod(dim, 0);
  for (std::size_t t = 0; t < g.torsion.size(); ++t) {
    if (!g.torsion[t].fits_slong_p()) fail(ErrorKind::argument, "torsion coefficient too large for witness search");
    mod[g.rank + t] = g.torsion[t].get_si();
  }
  auto small = [&](const IntVector& v) {
    std::vector<long> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!v[i].fits_slong_p()) return std::optional<std::vector<long>>{};
      out[i] = v[i].get_si();
    }
    return std::optional{out};
  };
  const auto goal = small(goal_big);
  if (!goal) return std::nullopt;

  using State = std::pair<Index, std::vector<long>>;
  std::map<State, std::pair<std::size_t, Index>> seen;  // state -> (parent slot, vertex)
  std::vector<const State*> slots;
  std::deque<std::size_t> queue;
  std::map<IndexPair, std::vector<long>> link_class;
  const Entourage& fine = fine_relation();

  auto push = [&](State s, std::size_t parent) {
    auto [it, inserted] = seen.emplace(std::move(s), std::pair{parent, Index{0}});
    if (!inserted) return false;
    slots.push_back(&it->first);
    queue.push_back(slots.size() - 1);
    return true;
  };
  push({x, std::vector<long>(dim, 0)}, 0);
  while (!queue.empty()) {
    const std::size_t id = queue.front();
    queue.pop_front();
    const State& cur = *slots[id];
    if (cur.first == y && cur.second == *goal) {
      Chain rev;
      for (std::size_t s = id;; s = seen.at(*slots[s]).first) {
        rev.push_back(slots[s]->first);
        if (s == 0) break;
      }
      return Chain(rev.rbegin(), rev.rend());
    }
    if (++states > budget.search.max_states) return std::nullopt;
    for (Index v : fine.ball(cur.first)) {
      if (v == cur.first) continue;
      auto lc = link_class.find({cur.first, v});
      if (lc == link_class.end()) {
        auto cls = small(target_->link_coordinates(cur.first, v));
        if (!cls) continue;
        lc = link_class.emplace(IndexPair{cur.first, v}, std::move(*cls)).first;
      }
      std::vector<long> next = cur.second;
      bool inside = true;
      for (std::size_t i = 0; i < dim; ++i) {
        next[i] += lc->second[i];
        if (mod[i]) {
          next[i] %= mod[i];
          if (next[i] < 0) next[i] += mod[i];
        } else if (std::labs(next[i]) > budget.class_norm) {
          inside = false;
        }
      }
      if (!inside) {
        pruned = true;
        continue;
      }
      push({v, std::move(next)}, id);
    }
  }
  return std::nullopt;
}

namespace {

JoinabilityVerdict trivial_yes(const Entourage& e, Index x) {
  JoinabilityVerdict v;
  v.x = v.y = x;
  v.verdict = Verdict::yes;
  v.witness = {x};
  v.certificate = HomotopyCertificate{e, {x}, {x}, {}};
  return v;
}

}  // namespace

JoinabilityVerdict JoinContext::witness(Index x, Index y, const JoinBudget& budget) const {
  const std::size_t n = target_relation().size();
  if (x >= n || y >= n) fail(ErrorKind::argument, "joinability: point index out of range");
  if (x == y) return trivial_yes(target_relation(), x);
  JoinabilityVerdict v;
  v.x = x;
  v.y = y;
  if (!target_relation()(x, y)) {
    v.verdict = Verdict::no;
    v.endpoint_obstruction = true;
    v.note = "pair is not related at the target scale";
    return v;
  }
  const auto p0 = fine_path(x, y);
  if (!p0) {
    v.verdict = Verdict::no;
    v.unreachable = true;
    v.note = "no fine chain joins the pair";
    return v;
  }
  const std::array<Index, 2> edge{x, y};
  const IntVector goal = chain_class(edge);
  const IntVector diff = target_->add(goal, target_->negate(chain_class(*p0)));
  if (!image_.contains(diff)) {
    v.verdict = Verdict::no;
    v.obstruction = diff;
    v.note = "every fine chain differs from the edge by a class outside the image of the fine scale";
    return v;
  }
  bool pruned = false;
  auto found = class_search(x, y, goal, budget, v.states, pruned);
  if (!found) {
    v.note = pruned ? "no chain within the class-norm bound" : "witness search budget exhausted";
    return v;
  }
  auto d = is_short(target_relation(), *found, budget.search, target_.get());
  if (d.verdict == Verdict::yes) {
    v.verdict = Verdict::yes;
    v.witness = std::move(*found);
    v.certificate = std::move(d.certificate);
  } else {
    v.witness = std::move(*found);
    v.note = "candidate with matching class not certified: " + d.note;
  }
  return v;
}

JoinabilityVerdict JoinContext::through_base(Index base, Index x, Index y, const JoinBudget& budget) const {
  const std::size_t n = target_relation().size();
  if (base >= n || x >= n || y >= n) fail(ErrorKind::argument, "g_entourage: point index out of range");
  JoinabilityVerdict v;
  v.x = x;
  v.y = y;
  if (!target_relation()(x, y)) {
    v.verdict = Verdict::no;
    v.endpoint_obstruction = true;
    v.note = "pair is not related at the target scale";
    return v;
  }
  const auto c = fine_path(base, x);
  const auto d = fine_path(base, y);
  if (!c || !d) {
    v.verdict = Verdict::no;
    v.unreachable = true;
    v.note = "no fine chain from the basepoint";
    return v;
  }
  const std::array<Index, 2> edge{x, y};
  const IntVector goal = chain_class(edge);
  const Chain cd = concat(reverse(*c), *d);
  const IntVector diff = target_->add(goal, target_->negate(chain_class(cd)));
  if (!image_.contains(diff)) {
    v.verdict = Verdict::no;
    v.obstruction = diff;
    v.note = "c⁻¹·d differs from the edge by a class outside the image of the fine scale for every choice of c, d";
    return v;
  }
  bool pruned = false;
  auto w = class_search(x, y, goal, budget, v.states, pruned);
  if (!w) {
    v.note = pruned ? "no chain within the class-norm bound" : "witness search budget exhausted";
    return v;
  }
  // d' = c·w ends at y, and c⁻¹·d' is the chain checked for shortness.
  Chain chain = concat(reverse(*c), concat(*c, *w));
  auto dec = is_short(target_relation(), chain, budget.search, target_.get());
  v.witness = std::move(chain);
  if (dec.verdict == Verdict::yes) {
    v.verdict = Verdict::yes;
    v.certificate = std::move(dec.certificate);
  } else {
    v.note = "candidate with matching class not certified: " + dec.note;
  }
  return v;
}

JoinabilityVerdict joinability_witness(const Entourage& target, const Entourage& fine, Index x, Index y,
                                       const JoinBudget& budget) {
  JoinContext ctx(std::make_shared<const Homology>(std::make_shared<const RipsSkeleton>(target)),
                  std::make_shared<const Homology>(std::make_shared<const RipsSkeleton>(fine)));
  return ctx.witness(x, y, budget);
}

Json join_to_json(const JoinabilityVerdict& v, const FiniteSpace* space) {
  Json j;
  j["pair"] = pair_labels(space, v.x, v.y);
  j["verdict"] = to_string(v.verdict);
  if (v.verdict == Verdict::no) {
    if (v.endpoint_obstruction)
      j["obstruction"] = {{"kind", "endpoints"}};
    else if (v.unreachable)
      j["obstruction"] = {{"kind", "unreachable"}};
    else
      j["obstruction"] = {{"kind", "h1"},
                          {"class", intvector_to_json(v.obstruction)},
                          {"exactness", "sound; complete only when the target edge-path group is abelian"}};
  }
  if (!v.witness.empty()) j["witness"] = v.witness;
  j["states"] = v.states;
  if (!v.note.empty()) j["note"] = v.note;
  if (v.certificate) j["certificate"] = certificate_to_json(*v.certificate);
  return j;
}

JoinAudit uniform_joinability_audit(const ScaleLadder& ladder, const JoinBudget& budget, unsigned threads) {
  if (ladder.size() < 2) fail(ErrorKind::argument, "uniform_joinability_audit: ladder needs at least two scales");
  const auto hom = ladder_homology(ladder, threads);
  const std::size_t last = ladder.size() - 1;
  JoinAudit audit;
  audit.supported_by.resize(last);
  audit.supported = true;
  for (std::size_t e = 0; e < last; ++e) {
    const JoinContext ctx(hom[e], hom[last]);
    for (std::size_t f = e + 1; f <= last; ++f) {
      JoinAuditCell cell;
      cell.coarse = e;
      cell.fine = f;
      const auto pairs = ladder[f].edges();
      std::vector<Verdict> verdicts(pairs.size());
      parallel_for(pairs.size(), threads,
                   [&](std::size_t i) { verdicts[i] = ctx.witness(pairs[i].first, pairs[i].second, budget).verdict; });
      cell.pairs = pairs.size();
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (verdicts[i] == Verdict::yes) {
          ++cell.yes;
          continue;
        }
        (verdicts[i] == Verdict::no ? cell.no : cell.unknown)++;
        cell.failures.push_back(pairs[i]);
      }
      if (cell.yes == cell.pairs && !audit.supported_by[e]) audit.supported_by[e] = f;
      audit.cells.push_back(std::move(cell));
    }
    if (!audit.supported_by[e]) audit.supported = false;
  }
  return audit;
}

Json audit_to_json(const JoinAudit& audit) {
  Json j;
  Json cells = Json::array();
  for (const auto& c : audit.cells) {
    Json cj;
    cj["coarse"] = c.coarse;
    cj["fine"] = c.fine;
    cj["pairs"] = c.pairs;
    cj["yes"] = c.yes;
    cj["no"] = c.no;
    cj["unknown"] = c.unknown;
    cj["fraction"] = c.pairs ? static_cast<double>(c.yes) / static_cast<double>(c.pairs) : 1.0;
    Json f = Json::array();
    for (auto [x, y] : c.failures) f.push_back({x, y});
    cj["failures"] = std::move(f);
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  Json sb = Json::array();
  for (const auto& s : audit.supported_by) sb.push_back(s ? Json(*s) : Json(nullptr));
  j["supported_by"] = std::move(sb);
  j["verdict"] = audit.supported ? "supported within ladder" : "not supported within ladder";
  return j;
}

GEntourage g_entourage(const Entourage& e, const ScaleLadder& ladder, Index basepoint, const JoinBudget& budget,
                       unsigned threads) {
  if (ladder.size() == 0) fail(ErrorKind::argument, "g_entourage: empty ladder");
  const JoinContext ctx(std::make_shared<const Homology>(std::make_shared<const RipsSkeleton>(e)),
                        std::make_shared<const Homology>(std::make_shared<const RipsSkeleton>(ladder.finest())));
  GEntourage g;
  g.basepoint = basepoint;
  g.relation = Entourage(e.size());
  const auto pairs = e.edges();
  g.pairs.resize(pairs.size());
  parallel_for(pairs.size(), threads,
               [&](std::size_t i) { g.pairs[i] = ctx.through_base(basepoint, pairs[i].first, pairs[i].second, budget); });
  for (const auto& v : g.pairs)
    if (v.verdict == Verdict::yes) g.relation.relate(v.x, v.y);
  return g;
}

Json g_entourage_to_json(const GEntourage& g, const FiniteSpace* space) {
  Json j;
  j["basepoint"] = space ? Json(space->labels()[g.basepoint]) : Json(g.basepoint);
  j["relation"] = entourage_to_json(g.relation);
  Json pairs = Json::array();
  for (const auto& v : g.pairs) pairs.push_back(join_to_json(v, space));
  j["pairs"] = std::move(pairs);
  return j;
}

}  // namespace ucov
