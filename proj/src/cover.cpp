#include "cover.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "parallel.hpp"

namespace ucov {

namespace {

void require_source(const SpaceMap& f, const Entourage& e, const char* op) {
  if (e.size() != f.source().size())
    fail(ErrorKind::argument, std::string(op) + ": entourage carrier does not match the source space");
}

const std::string& label(const FiniteSpace& s, Index i) { return s.labels()[i]; }

Check failure(std::string witness, Json detail) { return {false, std::move(witness), std::move(detail)}; }

// Synchronized walk of two `step`-chains from a common origin with equal
// images. Returns the first reachable pair rejected by `accept`, with the
// two chains that reach it.
template <class Accept>
std::optional<std::pair<Chain, Chain>> product_search(const SpaceMap& f, const Entourage& step, Accept&& accept) {
  const std::size_t n = f.source().size();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(n * n, none);
  std::deque<std::size_t> queue;
  for (Index x = 0; x < n; ++x) {
    parent[x * n + x] = x * n + x;
    queue.push_back(x * n + x);
  }
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    const Index x = s / n, xp = s % n;
    if (!accept(x, xp)) {
      Chain a, b;
      for (std::size_t t = s;; t = parent[t]) {
        a.push_back(t / n);
        b.push_back(t % n);
        if (parent[t] == t) break;
      }
      return std::pair{reverse(std::move(a)), reverse(std::move(b))};
    }
    const auto bx = step.ball(x), bxp = step.ball(xp);
    for (Index y : bx)
      for (Index yp : bxp) {
        if (f(y) != f(yp)) continue;
        const std::size_t t = y * n + yp;
        if (parent[t] != none) continue;
        parent[t] = s;
        queue.push_back(t);
      }
  }
  return std::nullopt;
}

Json chain_pair_json(const FiniteSpace& s, const Chain& a, const Chain& b) {
  Json ja = Json::array(), jb = Json::array();
  for (Index x : a) ja.push_back(label(s, x));
  for (Index x : b) jb.push_back(label(s, x));
  return {{"alpha", ja}, {"beta", jb}};
}

std::string chain_string(const FiniteSpace& s, const Chain& c) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + label(s, c[i]);
  return out + "]";
}

Json check_json(const Check& c) {
  Json j;
  j["ok"] = c.ok;
  if (!c.ok) {
    j["witness"] = c.witness;
    if (!c.detail.is_null()) j["detail"] = c.detail;
  }
  return j;
}

}  // namespace

bool generates_with(const SpaceMap& f, const Entourage& e, const Entourage& finer) {
  require_source(f, e, "generates_at");
  require_source(f, finer, "generates_at");
  const Entourage fi = image_under(f, finer).relation;
  return compose(fi, fi).subset_of(image_under(f, e).relation);
}

std::optional<std::size_t> generates_at(const SpaceMap& f, const Entourage& e, const ScaleLadder& candidates,
                                        std::size_t first) {
  for (std::size_t i = first; i < candidates.size(); ++i)
    if (generates_with(f, e, candidates[i])) return i;
  return std::nullopt;
}

Check evenly_covers(const SpaceMap& f, const Entourage& e) {
  require_source(f, e, "evenly_covers");
  const Entourage img = image_under(f, e).relation;
  const auto& src = f.source();
  const auto& tgt = f.target();
  for (Index x = 0; x < src.size(); ++x) {
    std::map<Index, Index> seen;  // image -> ball point
    for (Index b : e.ball(x)) {
      auto [it, inserted] = seen.emplace(f(b), b);
      if (!inserted)
        return failure("ball of " + label(src, x) + " is not mapped injectively: " + label(src, it->second) + " and " +
                           label(src, b) + " both map to " + label(tgt, f(b)),
                       {{"point", label(src, x)},
                        {"defect", "injectivity"},
                        {"collision", {label(src, it->second), label(src, b)}}});
    }
    for (Index u : img.ball(f(x)))
      if (!seen.contains(u))
        return failure("ball of " + label(src, x) + " misses " + label(tgt, u) + " in the image ball of " +
                           label(tgt, f(x)),
                       {{"point", label(src, x)}, {"defect", "surjectivity"}, {"missing", label(tgt, u)}});
  }
  return {};
}

Check is_simplicial_cover(const SpaceMap& f, const Entourage& e) {
  Check even = evenly_covers(f, e);
  if (!even.ok) return even;
  const Entourage img = image_under(f, e).relation;
  const auto& src = f.source();
  const auto& tgt = f.target();
  for (Index x = 0; x < src.size(); ++x) {
    std::map<Index, Index> lift;
    for (Index b : e.ball(x)) lift.emplace(f(b), b);
    const auto around = img.ball(f(x));
    for (std::size_t i = 0; i < around.size(); ++i)
      for (std::size_t j = i + 1; j < around.size(); ++j) {
        const Index u = around[i], v = around[j];
        if (u == f(x) || v == f(x) || !img(u, v)) continue;
        const Index y = lift.at(u), z = lift.at(v);
        if (!e(y, z))
          return failure("triangle {" + label(tgt, f(x)) + "," + label(tgt, u) + "," + label(tgt, v) +
                             "} does not lift at " + label(src, x) + ": lifts " + label(src, y) + "," +
                             label(src, z) + " are not related",
                         {{"point", label(src, x)},
                          {"triangle", {label(tgt, f(x)), label(tgt, u), label(tgt, v)}},
                          {"lifts", {label(src, y), label(src, z)}}});
      }
  }
  return {};
}

Check chain_lifting_at(const SpaceMap& f, const Entourage& e, const Entourage& finer) {
  require_source(f, e, "chain_lifting_at");
  require_source(f, finer, "chain_lifting_at");
  const Image img = image_under(f, finer);
  const auto& src = f.source();
  const auto& tgt = f.target();
  for (Index x = 0; x < src.size(); ++x) {
    const auto bx = e.ball(x);
    for (Index yp : img.relation.ball(f(x))) {
      if (yp == f(x)) continue;
      const bool lifted = std::any_of(bx.begin(), bx.end(), [&](Index xp) { return f(xp) == yp; });
      if (!lifted)
        return failure("link (" + label(tgt, f(x)) + "," + label(tgt, yp) + ") does not lift from " + label(src, x),
                       {{"point", label(src, x)}, {"link", {label(tgt, f(x)), label(tgt, yp)}}});
    }
  }
  return {};
}

Check transverse(const SpaceMap& f, const Entourage& e) {
  require_source(f, e, "transverse");
  const auto& src = f.source();
  for (auto [x, y] : e.edges())
    if (f(x) == f(y))
      return failure(label(src, x) + " and " + label(src, y) + " are related and share an image",
                     {{"pair", {label(src, x), label(src, y)}}});
  return {};
}

Check uniqueness_of_lifts(const SpaceMap& f, const Entourage& e) {
  require_source(f, e, "uniqueness_of_lifts");
  auto hit = product_search(f, e, [](Index x, Index xp) { return x == xp; });
  if (!hit) return {};
  const auto& src = f.source();
  return failure("distinct chains " + chain_string(src, hit->first) + " and " + chain_string(src, hit->second) +
                     " have the same image",
                 chain_pair_json(src, hit->first, hit->second));
}

Check c3_check(const SpaceMap& f, const Entourage& e, const Entourage& finer) {
  require_source(f, e, "c3_check");
  require_source(f, finer, "c3_check");
  auto hit = product_search(f, finer, [&](Index x, Index xp) { return e(x, xp); });
  if (!hit) return {};
  const auto& src = f.source();
  return failure("chains " + chain_string(src, hit->first) + " and " + chain_string(src, hit->second) +
                     " have the same image but end at unrelated points",
                 chain_pair_json(src, hit->first, hit->second));
}

C2Result c2_check(const SpaceMap& f, const Entourage& e, const Entourage& finer, const C2Budget& budget) {
  require_source(f, e, "c2_check");
  require_source(f, finer, "c2_check");
  C2Result r;
  if (f.is_injective() && finer.subset_of(e)) {
    r.proven = true;
    return r;
  }
  const Entourage down = image_under(f, finer).relation;
  const Homology down_h(std::make_shared<const RipsSkeleton>(down));
  const Homology up_h(std::make_shared<const RipsSkeleton>(e));
  auto image_of = [&](const Chain& c) {
    Chain out;
    for (Index x : c) out.push_back(f(x));
    return out;
  };

  for (Index x = 0; x < f.source().size(); ++x) {
    std::vector<Chain> chains{{x}};
    for (std::size_t k = 0; k < chains.size(); ++k) {
      if (chains[k].size() > budget.max_links) continue;
      for (Index v : finer.ball(chains[k].back())) {
        if (v == chains[k].back()) continue;
        Chain c = chains[k];
        c.push_back(v);
        chains.push_back(std::move(c));
      }
    }
    for (std::size_t i = 0; i < chains.size(); ++i)
      for (std::size_t j = i + 1; j < chains.size(); ++j) {
        const Chain& a = chains[i];
        const Chain& b = chains[j];
        if (f(a.back()) != f(b.back())) continue;
        if (!is_chain(e, a) || !is_chain(e, b)) continue;
        if (r.pairs_checked >= budget.max_pairs) {
          r.budget_exhausted = true;
          return r;
        }
        ++r.pairs_checked;
        const Chain fa = image_of(a), fb = image_of(b);
        if (collapse_duplicates(fa) != collapse_duplicates(fb) &&
            decide_homotopic(down, fa, fb, budget.search, &down_h).verdict != Verdict::yes)
          continue;
        if (e_homotopic(e, a, b, budget.search, &up_h).verdict == Verdict::no) {
          r.refuted = true;
          r.alpha = a;
          r.beta = b;
          return r;
        }
      }
  }
  return r;
}

CoverReport uniform_cover_verdict(const SpaceMap& f, const ScaleLadder& ladder, const C2Budget& budget,
                                  unsigned threads) {
  if (ladder.size() == 0) fail(ErrorKind::argument, "uniform_cover_verdict: empty ladder");
  CoverReport r;
  r.thresholds = ladder.thresholds();
  const std::size_t k = ladder.size(), last = k - 1;
  r.scales.resize(k);
  parallel_for(k, threads, [&](std::size_t i) {
    ScaleChecks& s = r.scales[i];
    s.evenly = evenly_covers(f, ladder[i]);
    s.simplicial = is_simplicial_cover(f, ladder[i]);
    s.transverse = transverse(f, ladder[i]);
    s.uniqueness = uniqueness_of_lifts(f, ladder[i]);
    s.generates = generates_at(f, ladder[i], ladder, i + 1);
  });
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) r.pairs.push_back({i, j, {}, {}, {}});
  parallel_for(r.pairs.size(), threads, [&](std::size_t p) {
    PairChecks& pc = r.pairs[p];
    pc.lifting = chain_lifting_at(f, ladder[pc.coarse], ladder[pc.fine]);
    pc.c3 = c3_check(f, ladder[pc.coarse], ladder[pc.fine]);
    pc.c2 = c2_check(f, ladder[pc.coarse], ladder[pc.fine], budget);
  });
  auto some_pair = [&](std::size_t i, bool strict, auto&& pred) {
    for (const auto& pc : r.pairs)
      if (pc.coarse == i && (!strict || pc.fine > i) && pred(pc)) return true;
    return false;
  };

  auto fail_uniform = [&](std::string why) {
    if (r.uniform_cover_failure.empty()) r.uniform_cover_failure = std::move(why);
  };
  for (std::size_t i = 0; i < last; ++i) {
    if (!r.scales[i].generates) fail_uniform("generates_at fails at scale " + std::to_string(i));
    if (!some_pair(i, true, [](const PairChecks& pc) { return pc.lifting.ok; }))
      fail_uniform("chain_lifting_at fails at scale " + std::to_string(i));
  }
  if (!r.scales[last].uniqueness.ok) fail_uniform("uniqueness_of_lifts fails at the finest scale");
  if (std::none_of(r.scales.begin(), r.scales.end(), [](const ScaleChecks& s) { return s.transverse.ok; }))
    fail_uniform("transverse fails at every scale");
  r.uniform_cover = r.uniform_cover_failure.empty();
  r.simplicial_base = r.scales[last].simplicial.ok;

  r.c1 = r.c3 = true;
  for (std::size_t i = 0; i < k; ++i) {
    if (!some_pair(i, false, [](const PairChecks& pc) { return pc.lifting.ok; })) {
      r.c1 = false;
      if (r.generalized_failure.empty()) r.generalized_failure = "chain_lifting_at fails at scale " + std::to_string(i);
    }
    if (!some_pair(i, false, [](const PairChecks& pc) { return pc.c3.ok; })) {
      r.c3 = false;
      if (r.generalized_failure.empty()) r.generalized_failure = "c3_check fails at scale " + std::to_string(i);
    }
    if (!some_pair(i, false, [](const PairChecks& pc) { return !pc.c2.refuted; })) {
      r.c2_refuted = true;
      if (r.generalized_failure.empty()) r.generalized_failure = "c2_check refuted at scale " + std::to_string(i);
    }
  }
  return r;
}

Json cover_report_to_json(const CoverReport& r) {
  Json j;
  Json scales = Json::array();
  for (std::size_t i = 0; i < r.scales.size(); ++i) {
    const auto& s = r.scales[i];
    Json sj;
    sj["index"] = i;
    if (i < r.thresholds.size()) sj["threshold"] = r.thresholds[i];
    sj["evenly_covers"] = check_json(s.evenly);
    sj["simplicial_cover"] = check_json(s.simplicial);
    sj["transverse"] = check_json(s.transverse);
    sj["uniqueness_of_lifts"] = check_json(s.uniqueness);
    sj["generates_witness"] = s.generates ? Json(*s.generates) : Json(nullptr);
    scales.push_back(std::move(sj));
  }
  j["scales"] = std::move(scales);
  Json pairs = Json::array();
  for (const auto& p : r.pairs) {
    Json pj;
    pj["coarse"] = p.coarse;
    pj["fine"] = p.fine;
    pj["chain_lifting"] = check_json(p.lifting);
    pj["c3"] = check_json(p.c3);
    Json c2;
    c2["status"] = p.c2.status();
    c2["pairs_checked"] = p.c2.pairs_checked;
    if (p.c2.budget_exhausted) c2["budget_exhausted"] = true;
    if (p.c2.refuted) c2["witness"] = {{"alpha", p.c2.alpha}, {"beta", p.c2.beta}};
    pj["c2"] = std::move(c2);
    pairs.push_back(std::move(pj));
  }
  j["pairs"] = std::move(pairs);
  Json v;
  v["uniform_cover"] = r.uniform_cover;
  if (!r.uniform_cover) v["uniform_cover_failure"] = r.uniform_cover_failure;
  v["simplicial_cover_base"] = r.simplicial_base;
  v["c1"] = r.c1;
  v["c3"] = r.c3;
  v["c2"] = r.c2_refuted ? "refuted" : "unrefuted at budget";
  v["generalized_cover"] = r.c1 && r.c3 && !r.c2_refuted;
  if (!r.generalized_failure.empty()) v["generalized_failure"] = r.generalized_failure;
  v["scope"] = "verdicts are relative to the supplied ladder, not to every entourage of the space";
  j["verdicts"] = std::move(v);
  return j;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<std::size_t>> CoverBall::fibers() const {
  std::map<Index, std::vector<std::size_t>> by;
  for (std::size_t v = 0; v < vertices.size(); ++v) by[vertices[v].endpoint].push_back(v);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [p, ids] : by) out.push_back(std::move(ids));
  return out;
}

CoverBall build_cover_ball(const Entourage& e, Index basepoint, std::size_t radius, const SearchBudget& budget) {
  if (basepoint >= e.size()) fail(ErrorKind::argument, "build_cover_ball: basepoint out of range");
  const Homology hom(std::make_shared<const RipsSkeleton>(e));
  CoverBall ball;
  ball.basepoint = basepoint;
  ball.radius = radius;
  ball.vertices.push_back({basepoint, {basepoint}, 0});
  std::map<Index, std::vector<std::size_t>> by_endpoint{{basepoint, {0}}};
  std::set<IndexPair> edges;

  for (std::size_t u = 0; u < ball.vertices.size(); ++u) {
    const Index p = ball.vertices[u].endpoint;
    const std::size_t depth = ball.vertices[u].depth;
    for (Index q : e.ball(p)) {
      if (q == p) continue;
      Chain ext = ball.vertices[u].witness;
      ext.push_back(q);
      std::optional<std::size_t> match;
      bool undecided = false;
      for (std::size_t v : by_endpoint[q]) {
        const auto d = decide_homotopic(e, ext, ball.vertices[v].witness, budget, &hom);
        if (d.verdict == Verdict::yes) {
          match = v;
          break;
        }
        if (d.verdict == Verdict::unknown) undecided = true;
      }
      if (!match && depth >= radius) {
        ball.truncated = true;
        continue;
      }
      if (!match) {
        if (undecided) ball.approximate = true;
        match = ball.vertices.size();
        ball.vertices.push_back({q, std::move(ext), depth + 1});
        by_endpoint[q].push_back(*match);
      }
      edges.insert({std::min(u, *match), std::max(u, *match)});
    }
  }
  ball.edges.assign(edges.begin(), edges.end());
  return ball;
}

Json cover_ball_to_json(const CoverBall& b, const FiniteSpace* space) {
  auto name = [&](Index x) { return space ? Json(space->labels()[x]) : Json(x); };
  Json j;
  j["basepoint"] = name(b.basepoint);
  j["radius"] = b.radius;
  j["truncated"] = b.truncated;
  j["approximate"] = b.approximate;
  Json verts = Json::array();
  for (std::size_t v = 0; v < b.vertices.size(); ++v) {
    Json w = Json::array();
    for (Index x : b.vertices[v].witness) w.push_back(name(x));
    verts.push_back({{"id", v}, {"endpoint", name(b.vertices[v].endpoint)}, {"depth", b.vertices[v].depth}, {"witness", w}});
  }
  j["vertices"] = std::move(verts);
  Json edges = Json::array();
  for (auto [u, v] : b.edges) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  Json fibers = Json::array();
  for (const auto& ids : b.fibers()) fibers.push_back({{"endpoint", name(b.vertices[ids.front()].endpoint)}, {"vertices", ids}});
  j["fibers"] = std::move(fibers);
  return j;
}

std::string cover_ball_to_dot(const CoverBall& b, const FiniteSpace* space) {
  auto name = [&](Index x) { return space ? space->labels()[x] : std::to_string(x); };
  std::ostringstream out;
  out << "graph cover_ball {\n";
  const auto fibers = b.fibers();
  for (std::size_t k = 0; k < fibers.size(); ++k) {
    out << "  subgraph cluster_" << k << " {\n    label=\"" << name(b.vertices[fibers[k].front()].endpoint) << "\";\n";
    for (std::size_t v : fibers[k]) out << "    v" << v << " [label=\"" << name(b.vertices[v].endpoint) << "\"];\n";
    out << "  }\n";
  }
  for (auto [u, v] : b.edges) out << "  v" << u << " -- v" << v << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace ucov
