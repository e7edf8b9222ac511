#include <ucov/ucov.h>

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "cover.hpp"
#include "gallery.hpp"
#include "io.hpp"
#include "tower.hpp"

struct ucov_space {
  std::shared_ptr<const ucov::FiniteSpace> space;
};

struct ucov_map {
  std::unique_ptr<ucov::SpaceMap> map;
  std::vector<double> ladder;
};

namespace {

using namespace ucov;

thread_local std::string last_error;

ucov_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::io:
      return UCOV_ERR_IO;
    case ErrorKind::parse:
      return UCOV_ERR_PARSE;
    case ErrorKind::validation:
      return UCOV_ERR_VALIDATION;
    case ErrorKind::certificate:
      return UCOV_ERR_CERTIFICATE;
    case ErrorKind::argument:
      return UCOV_ERR_ARGUMENT;
  }
  return UCOV_ERR_INTERNAL;
}

template <class Body>
ucov_status guarded(Body&& body) {
  try {
    last_error.clear();
    body();
    return UCOV_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const Json::exception& e) {
    last_error = e.what();
    return UCOV_ERR_PARSE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return UCOV_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const Json& j) {
  if (out) *out = dup(j.dump(2) + "\n");
}

void require(const void* p, const char* what) {
  if (!p) fail(ErrorKind::argument, std::string(what) + " is null");
}

ucov_options effective(const ucov_options* opts) {
  ucov_options o;
  ucov_options_default(&o);
  if (opts) o = *opts;
  if (o.max_states == 0 || o.class_norm <= 0 || o.c2_max_links == 0 || o.c2_max_pairs == 0)
    fail(ErrorKind::validation, "budgets must be positive");
  return o;
}

Comparison comparison(const ucov_options& o) { return o.strict ? Comparison::strict : Comparison::closed; }

SearchBudget search_budget(const ucov_options& o) { return {o.max_states, o.max_length}; }
JoinBudget join_budget(const ucov_options& o) { return {search_budget(o), o.class_norm}; }

Json budget_json(const ucov_options& o, std::size_t n) {
  Json b;
  b["max_states"] = o.max_states;
  b["max_length"] = o.max_length ? o.max_length : 4 * n;
  b["class_norm"] = o.class_norm;
  b["c2_max_links"] = o.c2_max_links;
  b["c2_max_pairs"] = o.c2_max_pairs;
  return b;
}

Json space_summary(const FiniteSpace& s) {
  Json j;
  j["name"] = s.name();
  j["points"] = s.size();
  j["diameter"] = s.diameter();
  return j;
}

std::vector<double> ladder_vector(const double* ladder, std::size_t len) {
  if (len && !ladder) fail(ErrorKind::argument, "ladder is null");
  return std::vector<double>(ladder, ladder + len);
}

Chain chain_vector(const FiniteSpace& s, const std::size_t* c, std::size_t len) {
  if (len == 0 || !c) fail(ErrorKind::validation, "chain is empty");
  Chain out(c, c + len);
  for (Index x : out)
    if (x >= s.size()) fail(ErrorKind::validation, "chain vertex " + std::to_string(x) + " out of range");
  return out;
}

Json labelled(const FiniteSpace& s, const Chain& c) {
  Json a = Json::array();
  for (Index x : c) a.push_back(s.labels()[x]);
  return a;
}

void copy_ladder(const std::vector<double>& src, double* out, std::size_t cap, std::size_t* count) {
  require(count, "count");
  *count = src.size();
  if (out)
    for (std::size_t i = 0; i < src.size() && i < cap; ++i) out[i] = src[i];
}

}  // namespace

extern "C" {

const char* ucov_last_error(void) { return last_error.c_str(); }

void ucov_string_free(char* s) { std::free(s); }

void ucov_options_default(ucov_options* opts) {
  if (!opts) return;
  const SearchBudget sb;
  const C2Budget c2;
  opts->max_states = sb.max_states;
  opts->max_length = sb.max_length;
  opts->class_norm = JoinBudget{}.class_norm;
  opts->c2_max_links = c2.max_links;
  opts->c2_max_pairs = c2.max_pairs;
  opts->threads = 0;
  opts->strict = 0;
}

ucov_status ucov_space_load(const char* path, const char* format, ucov_space** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    const SpaceFormat f = format ? parse_space_format(format) : guess_space_format(path);
    *out = new ucov_space{std::make_shared<const FiniteSpace>(load_space(path, f))};
  });
}

ucov_status ucov_space_gallery(const char* spec, ucov_space** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = new ucov_space{std::make_shared<const FiniteSpace>(gallery::by_spec(spec))};
  });
}

ucov_status ucov_space_from_json(const char* json, ucov_space** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new ucov_space{std::make_shared<const FiniteSpace>(space_from_json_or_gallery(parse_json(json, "space")))};
  });
}

void ucov_space_free(ucov_space* space) { delete space; }

size_t ucov_space_size(const ucov_space* space) { return space ? space->space->size() : 0; }

ucov_status ucov_space_to_json(const ucov_space* space, char** json_out) {
  return guarded([&] {
    require(space, "space");
    emit(json_out, space_to_json(*space->space));
  });
}

ucov_status ucov_space_index(const ucov_space* space, const char* label_or_index, size_t* out) {
  return guarded([&] {
    require(space, "space");
    require(label_or_index, "label");
    require(out, "out");
    try {
      *out = space->space->resolve(label_or_index);
    } catch (const Error& e) {
      fail(ErrorKind::validation, e.what());
    }
  });
}

ucov_status ucov_space_recommended_ladder(const ucov_space* space, double* out, size_t cap, size_t* count) {
  return guarded([&] {
    require(space, "space");
    copy_ladder(space->space->recommended_ladder(), out, cap, count);
  });
}

ucov_status ucov_analyze(const ucov_space* space, const double* ladder, size_t ladder_len, size_t basepoint,
                         double g_scale, int audit, const ucov_options* opts, char** json_out, char** text_out) {
  return guarded([&] {
    require(space, "space");
    const auto o = effective(opts);
    const FiniteSpace& s = *space->space;
    const auto thresholds = ladder_vector(ladder, ladder_len);
    const auto lad = ScaleLadder::from_thresholds(s, thresholds, comparison(o));
    const TowerReport tower = build_tower(lad, basepoint, o.threads);
    Json j;
    j["schema"] = kSchemaVersion;
    j["command"] = "analyze";
    j["space"] = space_summary(s);
    j["ladder"] = thresholds;
    j["comparison"] = o.strict ? "strict" : "closed";
    j["budget"] = budget_json(o, s.size());
    j["tower"] = tower_to_json(tower);
    if (audit) j["joinability_audit"] = audit_to_json(uniform_joinability_audit(lad, join_budget(o), o.threads));
    if (g_scale > 0) {
      const Entourage e = entourage_at(s, g_scale, comparison(o));
      Json g = g_entourage_to_json(g_entourage(e, lad, basepoint, join_budget(o), o.threads), &s);
      g["scale"] = g_scale;
      j["g_entourage"] = std::move(g);
    }
    emit(json_out, j);
    if (text_out) *text_out = dup(tower_table(tower));
  });
}

ucov_status ucov_map_load(const char* path, ucov_map** out) {
  return guarded([&] {
    require(path, "path");
    const std::string text = read_file(path);
    ucov_status st = ucov_map_from_json(text.c_str(), out);
    if (st != UCOV_OK) fail(st == UCOV_ERR_PARSE ? ErrorKind::parse : ErrorKind::validation, path + (": " + last_error));
  });
}

ucov_status ucov_map_from_json(const char* json, ucov_map** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    const Json j = parse_json(json, "map");
    auto m = std::make_unique<ucov_map>();
    m->map = std::make_unique<SpaceMap>(map_from_json(j));
    if (j.contains("ladder")) {
      try {
        m->ladder = j.at("ladder").get<std::vector<double>>();
      } catch (const Json::exception& e) {
        fail(ErrorKind::parse, std::string("map ladder: ") + e.what());
      }
    } else {
      m->ladder = m->map->source().recommended_ladder();
    }
    *out = m.release();
  });
}

void ucov_map_free(ucov_map* map) { delete map; }

ucov_status ucov_map_ladder(const ucov_map* map, double* out, size_t cap, size_t* count) {
  return guarded([&] {
    require(map, "map");
    copy_ladder(map->ladder, out, cap, count);
  });
}

ucov_status ucov_cover(const ucov_map* map, const double* ladder, size_t ladder_len, const ucov_options* opts,
                       int* verdict, char** json_out) {
  return guarded([&] {
    require(map, "map");
    const auto o = effective(opts);
    const SpaceMap& f = *map->map;
    const auto thresholds = ladder_vector(ladder, ladder_len);
    const auto lad = ScaleLadder::from_thresholds(f.source(), thresholds, comparison(o));
    C2Budget c2{o.c2_max_links, o.c2_max_pairs, search_budget(o)};
    const CoverReport r = uniform_cover_verdict(f, lad, c2, o.threads);
    Json j;
    j["schema"] = kSchemaVersion;
    j["command"] = "cover";
    j["source"] = space_summary(f.source());
    j["target"] = space_summary(f.target());
    j["ladder"] = thresholds;
    j["comparison"] = o.strict ? "strict" : "closed";
    j["budget"] = budget_json(o, f.source().size());
    j["report"] = cover_report_to_json(r);
    if (verdict) *verdict = r.uniform_cover ? UCOV_YES : UCOV_NO;
    emit(json_out, j);
  });
}

ucov_status ucov_join(const ucov_space* space, size_t x, size_t y, double target, double fine,
                      const ucov_options* opts, int* verdict, char** json_out) {
  return guarded([&] {
    require(space, "space");
    const auto o = effective(opts);
    const FiniteSpace& s = *space->space;
    if (x >= s.size() || y >= s.size()) fail(ErrorKind::validation, "pair index out of range");
    if (!(fine > 0) || !(target > 0)) fail(ErrorKind::validation, "scales must be positive");
    const auto v = joinability_witness(entourage_at(s, target, comparison(o)), entourage_at(s, fine, comparison(o)),
                                       x, y, join_budget(o));
    Json j;
    j["schema"] = kSchemaVersion;
    j["command"] = "join";
    j["space"] = space_summary(s);
    j["target"] = target;
    j["fine"] = fine;
    j["comparison"] = o.strict ? "strict" : "closed";
    j["budget"] = budget_json(o, s.size());
    Json r = join_to_json(v, &s);
    if (!v.witness.empty()) r["witness_labels"] = labelled(s, v.witness);
    j["result"] = std::move(r);
    if (verdict) *verdict = static_cast<int>(v.verdict);
    emit(json_out, j);
  });
}

ucov_status ucov_short(const ucov_space* space, const size_t* chain, size_t len, double scale,
                       const ucov_options* opts, int* verdict, char** json_out) {
  return guarded([&] {
    require(space, "space");
    const auto o = effective(opts);
    const FiniteSpace& s = *space->space;
    const Chain c = chain_vector(s, chain, len);
    const auto d = is_short(entourage_at(s, scale, comparison(o)), c, search_budget(o));
    Json j;
    j["schema"] = kSchemaVersion;
    j["command"] = "short";
    j["space"] = space_summary(s);
    j["scale"] = scale;
    j["chain"] = labelled(s, c);
    j["budget"] = budget_json(o, s.size());
    j["result"] = decision_to_json(d);
    if (verdict) *verdict = static_cast<int>(d.verdict);
    emit(json_out, j);
  });
}

ucov_status ucov_homotopic(const ucov_space* space, const size_t* c, size_t c_len, const size_t* d, size_t d_len,
                           double scale, const ucov_options* opts, int* verdict, char** json_out) {
  return guarded([&] {
    require(space, "space");
    const auto o = effective(opts);
    const FiniteSpace& s = *space->space;
    const Chain cc = chain_vector(s, c, c_len);
    const Chain dd = chain_vector(s, d, d_len);
    const auto r = decide_homotopic(entourage_at(s, scale, comparison(o)), cc, dd, search_budget(o));
    Json j;
    j["schema"] = kSchemaVersion;
    j["command"] = "homotopic";
    j["space"] = space_summary(s);
    j["scale"] = scale;
    j["chains"] = {labelled(s, cc), labelled(s, dd)};
    j["budget"] = budget_json(o, s.size());
    j["result"] = decision_to_json(r);
    if (verdict) *verdict = static_cast<int>(r.verdict);
    emit(json_out, j);
  });
}

ucov_status ucov_replay(const char* certificate_json, int* ok, char** json_out) {
  return guarded([&] {
    require(certificate_json, "certificate");
    const HomotopyCertificate cert = certificate_from_json(parse_json(certificate_json, "certificate"));
    const ReplayResult r = replay(cert);
    Json j;
    j["schema"] = kSchemaVersion;
    j["command"] = "replay";
    j["ok"] = r.ok;
    j["moves"] = cert.moves.size();
    if (r.failed_move) j["failed_move"] = *r.failed_move;
    if (!r.message.empty()) j["message"] = r.message;
    j["final_chain"] = r.final_chain;
    if (ok) *ok = r.ok ? 1 : 0;
    emit(json_out, j);
  });
}

ucov_status ucov_ball(const ucov_space* space, double scale, size_t basepoint, size_t radius,
                      const ucov_options* opts, char** json_out, char** dot_out) {
  return guarded([&] {
    require(space, "space");
    const auto o = effective(opts);
    const FiniteSpace& s = *space->space;
    if (basepoint >= s.size()) fail(ErrorKind::validation, "basepoint out of range");
    const CoverBall b = build_cover_ball(entourage_at(s, scale, comparison(o)), basepoint, radius, search_budget(o));
    Json j;
    j["schema"] = kSchemaVersion;
    j["command"] = "ball";
    j["space"] = space_summary(s);
    j["scale"] = scale;
    j["budget"] = budget_json(o, s.size());
    j["ball"] = cover_ball_to_json(b, &s);
    emit(json_out, j);
    if (dot_out) *dot_out = dup(cover_ball_to_dot(b, &s));
  });
}

}  // extern "C"
