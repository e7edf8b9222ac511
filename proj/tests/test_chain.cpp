#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chain.hpp"
#include "gallery.hpp"
#include "suites.hpp"

using namespace ucov;

namespace {

Entourage cycle(std::size_t n) {
  Entourage e(n);
  for (Index i = 0; i < n; ++i) e.relate(i, (i + 1) % n);
  return e;
}

struct Hexagon {
  FiniteSpace space = gallery::hexagon_ex72();
  Index a = space.resolve("a"), b = space.resolve("b");
  // arc a, f, e, d, c, b avoiding the missing side
  Chain arc() const {
    Chain c{a};
    for (Index k = 1; k <= 5; ++k) c.push_back((a + 6 - k) % 6);
    return c;
  }
};

}  // namespace

TEST_CASE("chain helpers") {
  const auto e = cycle(5);
  CHECK(is_chain(e, Chain{0, 1, 2}));
  CHECK_FALSE(is_chain(e, Chain{0, 2}));
  CHECK(first_invalid_link(e, Chain{0, 1, 3}) == std::optional<std::size_t>{1});
  CHECK_THROWS_AS(validate_chain(e, {0, 2}), Error);
  CHECK_THROWS_AS(validate_chain(e, {0, 9}), Error);
  CHECK(concat({0, 1}, {1, 2}) == Chain{0, 1, 2});
  CHECK(reverse(reverse({0, 1, 2, 3})) == Chain{0, 1, 2, 3});
  CHECK(collapse_duplicates({0, 0, 1, 1, 1, 2, 0}) == Chain{0, 1, 2, 0});
}

TEST_CASE("moves and their inverses") {
  const auto e = Entourage::complete(4);
  Chain c{0, 1, 2};
  const auto m = Move::insert(1, 3);
  apply_move(e, c, m);
  CHECK(c == Chain{0, 3, 1, 2});
  apply_move(e, c, m.inverse());
  CHECK(c == Chain{0, 1, 2});
  const auto c6 = cycle(6);
  Chain bad{0, 1, 2};
  CHECK_THROWS_AS(apply_move(c6, bad, Move::erase(1, 1)), Error);
  CHECK_THROWS_AS(apply_move(c6, bad, Move::erase(0, 0)), Error);
  CHECK_THROWS_AS(apply_move(c6, bad, Move::insert(1, 4)), Error);
}

TEST_CASE("certificate json round trip and tampering") {
  const auto e = Entourage::complete(4);
  HomotopyCertificate cert{e, {0, 1, 2}, {0, 2}, {Move::erase(1, 1)}};
  CHECK(replay(cert).ok);
  const auto back = certificate_from_json(parse_json(certificate_to_json(cert).dump(), "memory"));
  CHECK(back.start == cert.start);
  CHECK(back.target == cert.target);
  CHECK(back.moves.size() == 1);
  CHECK(replay(back).ok);
  auto j = certificate_to_json(cert);
  j["target"] = Json::array({0, 3});
  CHECK_FALSE(replay(certificate_from_json(j)).ok);
  CHECK_THROWS_AS(certificate_from_json(parse_json(R"({"moves":[]})", "m")), Error);
}

TEST_CASE("hexagon arc against the missing side") {
  const Hexagon h;
  const auto e1 = entourage_at(h.space, 1);
  const auto e3 = entourage_at(h.space, 3);
  const Chain edge{h.a, h.b};
  REQUIRE(is_chain(e1, h.arc()));
  const auto at1 = decide_homotopic(e1, h.arc(), edge);
  CHECK(at1.verdict == Verdict::no);
  CHECK_FALSE(Homology::is_zero(at1.obstruction));
  const auto at3 = decide_homotopic(e3, h.arc(), edge);
  REQUIRE(at3.verdict == Verdict::yes);
  REQUIRE(at3.certificate);
  CHECK(replay(*at3.certificate).ok);
  CHECK(is_short(e3, h.arc()).verdict == Verdict::yes);
  CHECK(is_short(e1, h.arc()).verdict == Verdict::no);
}

TEST_CASE("decider edge cases") {
  const auto e = cycle(6);
  CHECK_THROWS_AS(decide_homotopic(e, {0, 1}, {0, 5}), Error);
  const auto same = decide_homotopic(e, {0, 1, 2}, {0, 1, 2});
  CHECK(same.verdict == Verdict::yes);
  CHECK(same.certificate->moves.empty());
  // backtracking is trivial even without triangles
  const auto back = decide_homotopic(e, {0, 1, 0}, {0});
  CHECK(back.verdict == Verdict::yes);
  CHECK(replay(*back.certificate).ok);
  // endpoint-relaxed form accepts close endpoints
  const auto rel = e_homotopic(compose(e, e), {0, 1}, {1, 2});
  CHECK(rel.verdict == Verdict::yes);
}

TEST_CASE("reduction keeps legality") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const auto e = oracle::random_entourage(6, 0.6, rng);
    const auto c = oracle::random_chain(e, 0, 8, rng);
    std::vector<Move> moves;
    const auto red = reduce_chain(e, c, moves);
    HomotopyCertificate cert{e, c, red, moves};
    CHECK(replay(cert).ok);
    CHECK(red.size() <= c.size());
  }
}

TEST_CASE("certificates from close chains replay at the square") {
  const auto r = suites::close_chains(31, 300);
  INFO(r.first_failure);
  CHECK(r.cases == 300);
  CHECK(r.ok());
}

TEST_CASE("decider agrees with exhaustive search") {
  const auto r = suites::decider_oracle(41, 120);
  INFO(r.first_failure);
  INFO(r.stats);
  CHECK(r.cases == 120);
  CHECK(r.ok());
}

TEST_CASE("decision json carries the verdict") {
  const auto d = decide_homotopic(cycle(6), {0, 1, 2, 3, 4, 5, 0}, {0});
  const auto j = decision_to_json(d);
  CHECK(j.at("verdict") == "no");
  CHECK(j.contains("obstruction"));
}
