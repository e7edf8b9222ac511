#include "chain.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <unordered_map>

namespace ucov {

std::optional<std::size_t> first_invalid_link(const Entourage& e, std::span<const Index> seq) {
  for (std::size_t i = 0; i + 1 < seq.size(); ++i)
    if (seq[i] >= e.size() || seq[i + 1] >= e.size() || !e(seq[i], seq[i + 1])) return i;
  return std::nullopt;
}

bool is_chain(const Entourage& e, std::span<const Index> seq) {
  return !seq.empty() && seq.front() < e.size() && !first_invalid_link(e, seq);
}

Chain validate_chain(const Entourage& e, Chain seq) {
  if (seq.empty()) fail(ErrorKind::validation, "chain is empty");
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (seq[i] >= e.size())
      fail(ErrorKind::validation, "chain vertex " + std::to_string(seq[i]) + " at position " + std::to_string(i) +
                                      " out of range");
  if (auto bad = first_invalid_link(e, seq))
    fail(ErrorKind::validation, "invalid link at position " + std::to_string(*bad) + ": (" +
                                    std::to_string(seq[*bad]) + "," + std::to_string(seq[*bad + 1]) +
                                    ") is not related");
  return seq;
}

Chain concat(const Chain& c, const Chain& d) {
  if (c.empty() || d.empty()) fail(ErrorKind::argument, "concat: empty chain");
  if (c.back() != d.front()) fail(ErrorKind::argument, "concat: last point of the first chain is not the first of the second");
  Chain out = c;
  out.insert(out.end(), d.begin() + 1, d.end());
  return out;
}

Chain reverse(Chain c) {
  std::reverse(c.begin(), c.end());
  return c;
}

Chain collapse_duplicates(Chain c) {
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

void apply_move(const Entourage& e, Chain& c, const Move& m) {
  const std::size_t len = c.size();
  if (m.op == Move::Op::insert) {
    if (m.pos == 0 || m.pos >= len)
      fail(ErrorKind::certificate, "insert at position " + std::to_string(m.pos) + " would move an endpoint");
    if (m.vertex >= e.size()) fail(ErrorKind::certificate, "inserted vertex out of range");
    const Index a = c[m.pos - 1], b = c[m.pos];
    if (!e(a, m.vertex) || !e(m.vertex, b) || !e(a, b))
      fail(ErrorKind::certificate, "insert of " + std::to_string(m.vertex) + " at position " + std::to_string(m.pos) +
                                       " does not span a triangle with " + std::to_string(a) + "," + std::to_string(b));
    c.insert(c.begin() + static_cast<std::ptrdiff_t>(m.pos), m.vertex);
  } else {
    if (m.pos == 0 || m.pos + 1 >= len)
      fail(ErrorKind::certificate, "delete at position " + std::to_string(m.pos) + " would move an endpoint");
    if (!e(c[m.pos - 1], c[m.pos + 1]))
      fail(ErrorKind::certificate, "delete at position " + std::to_string(m.pos) + ": neighbours " +
                                       std::to_string(c[m.pos - 1]) + "," + std::to_string(c[m.pos + 1]) +
                                       " are not related");
    c.erase(c.begin() + static_cast<std::ptrdiff_t>(m.pos));
  }
}

namespace {

void do_move(const Entourage& e, Chain& c, const Move& m, std::vector<Move>& log) {
  apply_move(e, c, m);
  log.push_back(m);
}

// Removes repeated neighbours with legal deletions; only [a,a] is left alone.
void collapse_recorded(const Entourage& e, Chain& c, std::vector<Move>& log) {
  for (std::size_t k = 0; k + 1 < c.size() && c.size() > 2;) {
    if (c[k] != c[k + 1]) {
      ++k;
      continue;
    }
    if (k + 2 < c.size()) {
      do_move(e, c, Move::erase(k + 1, c[k + 1]), log);
    } else {
      do_move(e, c, Move::erase(k, c[k]), log);
      if (k > 0) --k;
    }
  }
}

std::vector<Move> inverted(const std::vector<Move>& moves) {
  std::vector<Move> out;
  out.reserve(moves.size());
  for (auto it = moves.rbegin(); it != moves.rend(); ++it) out.push_back(it->inverse());
  return out;
}

// Widest window c[i..j], j >= i+3, whose points share a common neighbour.
bool cone_rewrite(const Entourage& e, Chain& c, std::vector<Move>& log) {
  const std::size_t len = c.size();
  std::vector<std::uint64_t> acc(e.words());
  for (std::size_t i = 0; i + 3 < len; ++i) {
    auto r = e.row(c[i]);
    std::copy(r.begin(), r.end(), acc.begin());
    std::size_t j = i;
    std::optional<Index> apex;
    while (j + 1 < len) {
      auto rn = e.row(c[j + 1]);
      bool any = false;
      std::optional<Index> first;
      for (std::size_t w = 0; w < acc.size(); ++w) {
        const std::uint64_t x = acc[w] & rn[w];
        if (x && !first) first = w * 64 + static_cast<Index>(std::countr_zero(x));
        any = any || x;
      }
      if (!any) break;
      for (std::size_t w = 0; w < acc.size(); ++w) acc[w] &= rn[w];
      ++j;
      apex = first;
    }
    if (j < i + 3) continue;
    const Index v = *apex;
    for (std::size_t t = 0; t < j - i; ++t) do_move(e, c, Move::insert(i + 1 + 2 * t, v), log);
    for (std::size_t t = j - i - 1; t >= 1; --t) do_move(e, c, Move::erase(i + 2 * t, c[i + 2 * t]), log);
    collapse_recorded(e, c, log);
    return true;
  }
  return false;
}

struct ChainHash {
  std::size_t operator()(const Chain& c) const noexcept {
    std::size_t h = c.size();
    for (Index x : c) h ^= std::hash<Index>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

struct SearchSide {
  struct Node {
    Chain seq;
    std::size_t parent;
    std::vector<Move> moves;  // from parent to this node
  };
  std::vector<Node> nodes;
  std::unordered_map<Chain, std::size_t, ChainHash> index;
  std::deque<std::size_t> frontier;

  explicit SearchSide(Chain start) {
    index.emplace(start, 0);
    nodes.push_back({std::move(start), 0, {}});
    frontier.push_back(0);
  }

  std::vector<Move> path_to(std::size_t id) const {
    std::vector<std::vector<Move>> parts;
    while (id != 0) {
      parts.push_back(nodes[id].moves);
      id = nodes[id].parent;
    }
    std::vector<Move> out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) out.insert(out.end(), it->begin(), it->end());
    return out;
  }
};

// Neighbours of a canonical chain: one move, then duplicate collapse.
template <class Visit>
void for_each_neighbour(const Entourage& e, const Chain& s, std::size_t max_len, Visit&& visit) {
  const std::size_t len = s.size();
  for (std::size_t i = 1; i + 1 < len; ++i) {
    if (!e(s[i - 1], s[i + 1])) continue;
    Chain t = s;
    std::vector<Move> moves;
    do_move(e, t, Move::erase(i, s[i]), moves);
    collapse_recorded(e, t, moves);
    visit(std::move(t), std::move(moves));
  }
  if (len + 1 > max_len) return;
  for (std::size_t i = 1; i < len; ++i) {
    const Index a = s[i - 1], b = s[i];
    auto ra = e.row(a), rb = e.row(b);
    for (std::size_t w = 0; w < ra.size(); ++w) {
      std::uint64_t bits = ra[w] & rb[w];
      while (bits) {
        const Index v = w * 64 + static_cast<Index>(std::countr_zero(bits));
        bits &= bits - 1;
        if (v == a || v == b || !e(a, v) || !e(v, b)) continue;
        Chain t = s;
        t.insert(t.begin() + static_cast<std::ptrdiff_t>(i), v);
        visit(std::move(t), std::vector<Move>{Move::insert(i, v)});
      }
    }
  }
}

}  // namespace

Chain reduce_chain(const Entourage& e, Chain c, std::vector<Move>& moves) {
  collapse_recorded(e, c, moves);
  while (true) {
    bool changed = false;
    for (std::size_t i = 1; i + 1 < c.size();) {
      if (e(c[i - 1], c[i + 1])) {
        do_move(e, c, Move::erase(i, c[i]), moves);
        collapse_recorded(e, c, moves);
        changed = true;
        if (i > 1) --i;
      } else {
        ++i;
      }
    }
    if (cone_rewrite(e, c, moves)) changed = true;
    if (!changed) return c;
  }
}

ReplayResult replay(const HomotopyCertificate& cert) {
  ReplayResult r;
  if (cert.start.empty() || cert.target.empty()) {
    r.message = "empty start or target chain";
    return r;
  }
  if (auto bad = first_invalid_link(cert.entourage, cert.start)) {
    r.message = "start chain has an invalid link at position " + std::to_string(*bad);
    return r;
  }
  if (auto bad = first_invalid_link(cert.entourage, cert.target)) {
    r.message = "target chain has an invalid link at position " + std::to_string(*bad);
    return r;
  }
  Chain c = cert.start;
  for (std::size_t k = 0; k < cert.moves.size(); ++k) {
    try {
      apply_move(cert.entourage, c, cert.moves[k]);
    } catch (const Error& e) {
      r.failed_move = k;
      r.message = "move " + std::to_string(k) + ": " + e.what();
      r.final_chain = std::move(c);
      return r;
    }
  }
  r.final_chain = c;
  if (collapse_duplicates(c) != collapse_duplicates(cert.target)) {
    r.message = "moves end at a chain different from the target";
    return r;
  }
  r.ok = true;
  return r;
}

Json certificate_to_json(const HomotopyCertificate& cert) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["entourage"] = entourage_to_json(cert.entourage);
  j["start"] = cert.start;
  j["target"] = cert.target;
  Json moves = Json::array();
  for (const auto& m : cert.moves) {
    Json mj;
    if (m.op == Move::Op::insert) {
      mj["op"] = "insert";
      mj["pos"] = m.pos;
      mj["vertex"] = m.vertex;
    } else {
      mj["op"] = "delete";
      mj["pos"] = m.pos;
    }
    moves.push_back(std::move(mj));
  }
  j["moves"] = std::move(moves);
  return j;
}

HomotopyCertificate certificate_from_json(const Json& j) {
  try {
    HomotopyCertificate cert;
    cert.entourage = entourage_from_json(j.at("entourage"));
    cert.start = j.at("start").get<Chain>();
    cert.target = j.at("target").get<Chain>();
    for (const auto& mj : j.at("moves")) {
      const auto op = mj.at("op").get<std::string>();
      const auto pos = mj.at("pos").get<std::size_t>();
      if (op == "insert") {
        cert.moves.push_back(Move::insert(pos, mj.at("vertex").get<Index>()));
      } else if (op == "delete") {
        cert.moves.push_back(Move::erase(pos, static_cast<Index>(-1)));
      } else {
        fail(ErrorKind::parse, "unknown move op '" + op + "'");
      }
    }
    return cert;
  } catch (const Json::exception& e) {
    fail(ErrorKind::parse, std::string("certificate json: ") + e.what());
  }
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes:
      return "yes";
    case Verdict::no:
      return "no";
    case Verdict::unknown:
      return "unknown";
  }
  return "?";
}

HomotopyDecision decide_homotopic(const Entourage& e, const Chain& c0, const Chain& d0, const SearchBudget& budget,
                                  const Homology* hom) {
  const Chain c = validate_chain(e, c0);
  const Chain d = validate_chain(e, d0);
  if (c.front() != d.front() || c.back() != d.back())
    fail(ErrorKind::argument, "decide_homotopic: chains have different endpoints");

  HomotopyDecision out;
  out.max_length = budget.max_length ? budget.max_length : 4 * e.size();
  if (c == d) {
    out.verdict = Verdict::yes;
    out.certificate = HomotopyCertificate{e, c, d, {}};
    return out;
  }

  std::optional<Homology> local;
  if (!hom) hom = &local.emplace(std::make_shared<const RipsSkeleton>(e));
  const Chain loop = concat(c, reverse(d));
  IntVector cls = hom->sequence_coordinates(loop);
  if (!Homology::is_zero(cls)) {
    out.verdict = Verdict::no;
    out.obstruction = std::move(cls);
    out.note = "nonzero class of c followed by d reversed";
    return out;
  }

  // A one-point chain admits no moves; work from the doubled point instead.
  const Chain cs = c.size() == 1 ? Chain{c[0], c[0]} : c;
  const Chain ds = d.size() == 1 ? Chain{d[0], d[0]} : d;
  std::vector<Move> from_c, from_d;
  const Chain nc = reduce_chain(e, cs, from_c);
  const Chain nd = reduce_chain(e, ds, from_d);

  auto finish = [&](std::vector<Move> middle_c, std::vector<Move> middle_d) {
    std::vector<Move> moves = std::move(from_c);
    moves.insert(moves.end(), middle_c.begin(), middle_c.end());
    auto back = inverted(middle_d);
    moves.insert(moves.end(), back.begin(), back.end());
    back = inverted(from_d);
    moves.insert(moves.end(), back.begin(), back.end());
    out.verdict = Verdict::yes;
    out.certificate = HomotopyCertificate{e, cs, ds, std::move(moves)};
  };

  if (nc == nd) {
    finish({}, {});
    return out;
  }

  SearchSide side_c(nc), side_d(nd);
  while (!side_c.frontier.empty() || !side_d.frontier.empty()) {
    if (out.states_expanded >= budget.max_states) {
      out.note = "state budget exhausted";
      return out;
    }
    const bool grow_c = !side_c.frontier.empty() &&
                        (side_d.frontier.empty() || side_c.frontier.size() <= side_d.frontier.size());
    SearchSide& mine = grow_c ? side_c : side_d;
    SearchSide& other = grow_c ? side_d : side_c;
    const std::size_t id = mine.frontier.front();
    mine.frontier.pop_front();
    ++out.states_expanded;
    std::optional<std::pair<std::size_t, std::size_t>> meet;  // (mine id, other id)
    const Chain current = mine.nodes[id].seq;
    for_each_neighbour(e, current, out.max_length, [&](Chain t, std::vector<Move> moves) {
      if (meet || mine.index.contains(t)) return;
      const std::size_t nid = mine.nodes.size();
      mine.index.emplace(t, nid);
      auto hit = other.index.find(t);
      mine.nodes.push_back({std::move(t), id, std::move(moves)});
      mine.frontier.push_back(nid);
      if (hit != other.index.end()) meet = std::pair{nid, hit->second};
    });
    if (meet) {
      auto pm = mine.path_to(meet->first);
      auto po = other.path_to(meet->second);
      if (grow_c)
        finish(std::move(pm), std::move(po));
      else
        finish(std::move(po), std::move(pm));
      return out;
    }
  }
  out.note = "move graph exhausted within the length bound";
  return out;
}

HomotopyDecision e_homotopic(const Entourage& e, const Chain& c0, const Chain& d0, const SearchBudget& budget,
                             const Homology* hom) {
  const Chain c = validate_chain(e, c0);
  const Chain d = validate_chain(e, d0);
  if (!e(c.front(), d.front()) || !e(d.back(), c.back())) {
    HomotopyDecision out;
    out.verdict = Verdict::no;
    out.endpoint_obstruction = true;
    out.note = "endpoints are not related";
    return out;
  }
  Chain target{c.front()};
  target.insert(target.end(), d.begin(), d.end());
  target.push_back(c.back());
  return decide_homotopic(e, c, target, budget, hom);
}

HomotopyDecision is_short(const Entourage& f, const Chain& c0, const SearchBudget& budget, const Homology* hom) {
  const Chain c = validate_chain(f, c0);
  if (!f(c.front(), c.back())) {
    HomotopyDecision out;
    out.verdict = Verdict::no;
    out.endpoint_obstruction = true;
    out.note = "endpoints are not related";
    return out;
  }
  const Chain edge = c.front() == c.back() ? Chain{c.front()} : Chain{c.front(), c.back()};
  return decide_homotopic(f, c, edge, budget, hom);
}

HomotopyCertificate close_chains_certificate(const Entourage& e, const Chain& c0, const Chain& d0) {
  const Chain c = validate_chain(e, c0);
  const Chain d = validate_chain(e, d0);
  if (c.size() != d.size()) fail(ErrorKind::argument, "close_chains_certificate: chains differ in length");
  if (c.front() != d.front() || c.back() != d.back())
    fail(ErrorKind::argument, "close_chains_certificate: chains have different endpoints");
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!e(c[i], d[i]))
      fail(ErrorKind::argument, "close_chains_certificate: points at position " + std::to_string(i) +
                                    " are not related");
  HomotopyCertificate cert{compose(e, e), c, d, {}};
  if (c == d) return cert;
  // x0,y0,x1,y1,...,x_{k-1},y_{k-1},x_k, then drop the x's and y0 = x0.
  const std::size_t k = c.size() - 1;
  for (std::size_t i = 0; i < k; ++i) cert.moves.push_back(Move::insert(2 * i + 1, d[i]));
  for (std::size_t i = k - 1; i >= 1; --i) cert.moves.push_back(Move::erase(2 * i, c[i]));
  cert.moves.push_back(Move::erase(1, d[0]));
  return cert;
}

Json decision_to_json(const HomotopyDecision& d) {
  Json j;
  j["verdict"] = to_string(d.verdict);
  if (d.verdict == Verdict::no) {
    if (d.endpoint_obstruction)
      j["obstruction"] = {{"kind", "endpoints"}};
    else
      j["obstruction"] = {{"kind", "h1"}, {"class", intvector_to_json(d.obstruction)}};
  }
  j["states_expanded"] = d.states_expanded;
  j["max_length"] = d.max_length;
  if (!d.note.empty()) j["note"] = d.note;
  if (d.certificate) j["certificate"] = certificate_to_json(*d.certificate);
  return j;
}

}  // namespace ucov
