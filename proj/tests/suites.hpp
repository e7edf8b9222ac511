#pragma once

// Randomized property suites shared by the unit tests (small counts) and
// the acceptance binary (full counts). Each returns how many instances ran
// and the first discrepancy found.

#include <random>
#include <sstream>
#include <string>

#include "chain.hpp"
#include "cover.hpp"
#include "oracles.hpp"

namespace suites {

using namespace ucov;

struct Result {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
  std::string stats;

  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
  bool ok() const { return failures == 0; }
};

inline std::string show(const Chain& c) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ']';
  return os.str();
}

inline std::string show(const Entourage& e) { return entourage_to_json(e).dump(); }

// Random equivalence relation: the finest scale of a ladder closed under squares.
inline Entourage random_partition(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<Index> block(0, n - 1);
  std::vector<Index> b(n);
  for (auto& x : b) x = block(rng);
  Entourage e(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (b[i] == b[j]) e.relate(i, j);
  return e;
}

// Ladder coarsest first in which every scale contains the square of the next.
inline std::vector<Entourage> square_closed_ladder(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<Entourage> out{random_partition(n, rng)};
  std::bernoulli_distribution coin(0.25);
  while (out.size() < k) {
    Entourage next = compose(out.back(), out.back());
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        if (coin(rng)) next.relate(i, j);
    out.push_back(next);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

inline SpaceMap random_map(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  auto src = std::make_shared<const FiniteSpace>(FiniteSpace::from_matrix(
      [&] {
        std::vector<std::string> l;
        for (std::size_t i = 0; i < n; ++i) l.push_back("x" + std::to_string(i));
        return l;
      }(),
      [&] {
        std::vector<double> d(n * n, 1.0);
        for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0;
        return d;
      }()));
  auto dst = std::make_shared<const FiniteSpace>(FiniteSpace::from_matrix(
      [&] {
        std::vector<std::string> l;
        for (std::size_t i = 0; i < m; ++i) l.push_back("y" + std::to_string(i));
        return l;
      }(),
      [&] {
        std::vector<double> d(m * m, 1.0);
        for (std::size_t i = 0; i < m; ++i) d[i * m + i] = 0;
        return d;
      }()));
  std::vector<Index> assign(n);
  for (auto& a : assign) a = std::uniform_int_distribution<Index>(0, m - 1)(rng);
  return SpaceMap(src, dst, std::move(assign));
}

// Uniqueness of lifts at some scale iff transverse at some scale, over
// ladders closed under squares. Also checks the proof step: T transverse and
// F∘F ⊆ T give uniqueness at F.
inline Result lifts_vs_transverse(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  Result r;
  std::size_t both = 0;
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t n = 2 + t % 5, m = 1 + (t / 5) % std::min<std::size_t>(n, 6);
    const auto f = random_map(n, m, rng);
    const auto ladder = square_closed_ladder(n, 2 + t % 3, rng);
    bool uniq = false, trans = false;
    for (const auto& e : ladder) {
      uniq = uniq || uniqueness_of_lifts(f, e).ok;
      trans = trans || transverse(f, e).ok;
    }
    for (const auto& big : ladder)
      for (const auto& small : ladder)
        if (compose(small, small).subset_of(big) && transverse(f, big).ok && !uniqueness_of_lifts(f, small).ok)
          r.fail("transverse scale " + show(big) + " but no unique lifts at " + show(small));
    ++r.cases;
    both += uniq && trans ? 1 : 0;
    if (uniq != trans)
      r.fail("map " + show(f.assign()) + ": unique lifts somewhere " + std::to_string(uniq) +
             ", transverse somewhere " + std::to_string(trans));
  }
  r.stats = std::to_string(both) + " instances positive on both sides";
  return r;
}

// Pointwise e-close equal-length chains with common endpoints; the
// interleaving certificate must replay at e∘e and end at the second chain.
inline Result close_chains(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  Result r;
  std::size_t attempts = 0, longest = 0;
  while (r.cases < count && attempts < 200 * count) {
    ++attempts;
    const std::size_t n = 2 + attempts % 7;
    const auto e = oracle::random_entourage(n, 0.5, rng);
    const std::size_t links = 1 + attempts % 7;
    const auto c = oracle::random_chain(e, std::uniform_int_distribution<Index>(0, n - 1)(rng), links, rng);
    Chain d{c[0]};
    bool ok = true;
    for (std::size_t i = 1; i < links && ok; ++i) {
      std::vector<Index> choice;
      for (Index v : e.ball(c[i]))
        if (e(d.back(), v)) choice.push_back(v);
      if (choice.empty()) ok = false;
      else d.push_back(choice[std::uniform_int_distribution<std::size_t>(0, choice.size() - 1)(rng)]);
    }
    if (!ok || !e(d.back(), c.back())) continue;
    d.push_back(c.back());
    ++r.cases;
    longest = std::max(longest, c.size());
    try {
      const auto cert = close_chains_certificate(e, c, d);
      const auto rep = replay(cert);
      if (!(cert.entourage == compose(e, e)))
        r.fail("certificate not stated at the square for " + show(c) + " " + show(d));
      else if (!rep.ok)
        r.fail("replay failed for " + show(c) + " -> " + show(d) + ": " + rep.message);
      else if (collapse_duplicates(rep.final_chain) != collapse_duplicates(d))
        r.fail("replay of " + show(c) + " ended at " + show(rep.final_chain));
    } catch (const std::exception& ex) {
      r.fail("no certificate for " + show(c) + " " + show(d) + ": " + ex.what());
    }
  }
  r.stats = "longest chain " + std::to_string(longest) + " points";
  return r;
}

// Library H1 against the dense simplicial oracle.
inline Result homology_oracle(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dens(0.2, 0.65);
  Result r;
  std::size_t nontrivial = 0, max_rank = 0;
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t n = 1 + t % 8;
    const auto e = oracle::random_entourage(n, dens(rng), rng);
    const auto mine = oracle::from_library(h1(RipsSkeleton(e)));
    const auto ref = oracle::h1(e);
    ++r.cases;
    nontrivial += ref.rank > 0 || !ref.torsion.empty() ? 1 : 0;
    max_rank = std::max<std::size_t>(max_rank, static_cast<std::size_t>(ref.rank));
    if (!(mine == ref))
      r.fail(show(e) + ": rank " + std::to_string(mine.rank) + " vs oracle " + std::to_string(ref.rank));
  }
  r.stats = std::to_string(nontrivial) + " nontrivial groups, max rank " + std::to_string(max_rank);
  return r;
}

// Budgeted decider against exhaustive search of the move graph (chains of at
// most `cap` points). The oracle is conclusive only when it connects the two
// chains; it cannot rule homotopy out. Checked: oracle yes => decider yes,
// decider no => oracle finds nothing, decider yes => certificate replays and
// the loop class is zero.
inline Result decider_oracle(std::uint64_t seed, std::size_t count, std::size_t cap = 8) {
  std::mt19937_64 rng(seed);
  Result r;
  std::size_t yes = 0, no = 0, unknown = 0, oracle_yes = 0, attempts = 0;
  while (r.cases < count && attempts < 100 * count) {
    ++attempts;
    const std::size_t n = 3 + attempts % 4;
    Entourage e;
    Chain c, d;
    if (attempts % 2) {
      e = oracle::random_entourage(n, std::uniform_real_distribution<double>(0.25, 0.6)(rng), rng);
      c = oracle::random_chain(e, 0, 1 + attempts % 5, rng);
      for (int tries = 0; tries < 50 && d.empty(); ++tries) {
        auto cand = oracle::random_chain(e, 0, 1 + (attempts + tries) % 5, rng);
        if (cand.back() == c.back()) d = std::move(cand);
      }
    } else {
      // the two ways around a cycle with a few random chords
      e = oracle::random_entourage(n, 0.2, rng);
      for (Index i = 0; i < n; ++i) e.relate(i, (i + 1) % n);
      const Index k = std::uniform_int_distribution<Index>(1, n - 1)(rng);
      for (Index i = 0; i <= k; ++i) c.push_back(i);
      d.push_back(0);
      for (Index i = n - 1; i >= k; --i) d.push_back(i);
    }
    if (d.empty()) continue;
    ++r.cases;
    const std::string inst = show(e) + " " + show(c) + " vs " + show(d);
    const auto dec = decide_homotopic(e, c, d);
    const auto ora = oracle::exhaustive_homotopy(e, c, d, cap);
    const Homology hom(std::make_shared<const RipsSkeleton>(e));
    const bool loop_zero = Homology::is_zero(hom.sequence_coordinates(concat(c, reverse(d))));
    oracle_yes += ora == oracle::Reach::connected ? 1 : 0;
    switch (dec.verdict) {
      case Verdict::yes: {
        ++yes;
        if (!dec.certificate) {
          r.fail("yes without certificate: " + inst);
          break;
        }
        if (!replay(*dec.certificate).ok) r.fail("certificate does not replay: " + inst);
        if (!loop_zero || !Homology::is_zero(dec.obstruction)) r.fail("yes with nonzero obstruction: " + inst);
        break;
      }
      case Verdict::no:
        ++no;
        if (ora == oracle::Reach::connected) r.fail("decider no, oracle connected: " + inst);
        if (!dec.endpoint_obstruction && Homology::is_zero(dec.obstruction)) r.fail("no without obstruction: " + inst);
        break;
      case Verdict::unknown:
        ++unknown;
        if (ora == oracle::Reach::connected) r.fail("decider unknown, oracle connected: " + inst);
        break;
    }
  }
  r.stats = std::to_string(yes) + " yes, " + std::to_string(no) + " no, " + std::to_string(unknown) +
            " unknown; oracle connected " + std::to_string(oracle_yes);
  return r;
}

}  // namespace suites
