// Command-line driver over the C interface.

#include <ucov/ucov.h>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;
constexpr int kExitCertificate = 3;
constexpr int kExitInternal = 4;

struct Failure {
  int code;
  std::string message;
};

int exit_code(ucov_status st) {
  switch (st) {
    case UCOV_OK:
      return 0;
    case UCOV_ERR_CERTIFICATE:
      return kExitCertificate;
    case UCOV_ERR_INTERNAL:
      return kExitInternal;
    default:
      return kExitInput;
  }
}

void check(ucov_status st) {
  if (st != UCOV_OK) throw Failure{exit_code(st), ucov_last_error()};
}

struct Str {
  char* p = nullptr;
  ~Str() { ucov_string_free(p); }
  std::string get() const { return p ? p : ""; }
};

struct SpaceHandle {
  ucov_space* p = nullptr;
  ~SpaceHandle() { ucov_space_free(p); }
};

struct Common {
  std::string gallery, space_file, space_format, out;
  ucov_options opts{};
};

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitInput, "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{kExitInput, "cannot write '" + path + "'"};
}

void load_space(const Common& c, SpaceHandle& h) {
  if (!c.gallery.empty() == !c.space_file.empty()) throw Failure{kExitInput, "give exactly one of --gallery and --space"};
  if (!c.gallery.empty())
    check(ucov_space_gallery(c.gallery.c_str(), &h.p));
  else
    check(ucov_space_load(c.space_file.c_str(), c.space_format.empty() ? nullptr : c.space_format.c_str(), &h.p));
}

size_t index_of(const SpaceHandle& h, const std::string& label) {
  size_t i = 0;
  check(ucov_space_index(h.p, label.c_str(), &i));
  return i;
}

std::vector<double> parse_ladder(const std::string& spec, const std::vector<double>& automatic) {
  if (spec.empty() || spec == "auto") {
    if (automatic.empty()) throw Failure{kExitInput, "no recommended ladder available; pass --ladder"};
    return automatic;
  }
  std::vector<double> out;
  for (const auto& item : split(spec)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Failure{kExitInput, "bad ladder entry '" + item + "'"};
    }
  }
  return out;
}

template <class Getter>
std::vector<double> fetch_ladder(Getter&& get) {
  size_t count = 0;
  check(get(nullptr, 0, &count));
  std::vector<double> v(count);
  check(get(v.data(), v.size(), &count));
  return v;
}

std::vector<size_t> parse_chain(const SpaceHandle& h, const std::string& spec) {
  std::vector<size_t> out;
  for (const auto& item : split(spec)) out.push_back(index_of(h, item));
  return out;
}

// Moves an embedded certificate into its own file and records the path.
void externalize_certificate(Json& report, const std::string& path) {
  Json& result = report["result"];
  if (!result.contains("certificate")) return;
  write_out(path, result["certificate"].dump(2) + "\n");
  result.erase("certificate");
  result["certificate_file"] = path;
}

void collect_certificates(const Json& j, std::vector<const Json*>& out) {
  if (j.is_object()) {
    if (j.contains("moves") && j.contains("entourage")) {
      out.push_back(&j);
      return;
    }
    for (const auto& [k, v] : j.items()) collect_certificates(v, out);
  } else if (j.is_array()) {
    for (const auto& v : j) collect_certificates(v, out);
  }
}

int verdict_exit(int verdict) { return verdict == UCOV_YES ? 0 : kExitNegative; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform covering maps, chain homotopy and H1 towers on finite metric samples"};
  app.require_subcommand(1);
  Common c;
  ucov_options_default(&c.opts);

  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--threads", c.opts.threads, "worker threads (0 = all cores)");
    sub->add_flag("--strict", c.opts.strict, "relate points at distance < eps instead of <= eps");
    sub->add_option("--max-states", c.opts.max_states, "homotopy search: expanded states")->capture_default_str();
    sub->add_option("--max-length", c.opts.max_length, "homotopy search: chain length cap (0 = 4n)");
    sub->add_option("--class-norm", c.opts.class_norm, "witness search: class-vector max-norm")->capture_default_str();
    sub->add_option("-o,--out", c.out, "report path (default stdout)");
  };
  auto add_space = [&](CLI::App* sub) {
    sub->add_option("--gallery", c.gallery, "gallery space, e.g. polygon:12,1 or solenoid:2,64,4,1");
    sub->add_option("--space", c.space_file, "space file (json, csv-points, csv-matrix)");
    sub->add_option("--space-format", c.space_format, "json | csv-points | csv-matrix");
  };

  std::string ladder_spec = "auto", basepoint, format = "json", pair, chain, against, cert_path = "certificate.json",
              map_path, cert_file;
  double g_scale = 0, target = 0, fine = 0, scale = 0;
  bool audit = false;
  size_t radius = 3;

  auto* analyze = app.add_subcommand("analyze", "H1 tower, stabilization diagnostics, optional G(E) and audit");
  add_space(analyze);
  add_budget(analyze);
  analyze->add_option("--ladder", ladder_spec, "auto or decreasing thresholds a,b,c")->capture_default_str();
  analyze->add_option("--basepoint", basepoint, "label or index (default: first distinguished point)");
  analyze->add_option("--g-scale", g_scale, "also compute G(E) at this scale against the finest ladder scale");
  analyze->add_flag("--audit", audit, "uniform joinability audit over the ladder");
  analyze->add_option("--format", format, "json | text")->check(CLI::IsMember({"json", "text"}));

  auto* cover = app.add_subcommand("cover", "covering predicates and ladder verdicts for a map");
  add_budget(cover);
  cover->add_option("map", map_path, "map json {source, target, assign[, ladder]}")->required();
  cover->add_option("--ladder", ladder_spec, "auto (ladder in the map file) or thresholds")->capture_default_str();
  cover->add_option("--c2-links", c.opts.c2_max_links, "c2 search: chain length in links")->capture_default_str();
  cover->add_option("--c2-pairs", c.opts.c2_max_pairs, "c2 search: chain pairs examined")->capture_default_str();

  auto* join = app.add_subcommand("join", "joinability witness for a pair");
  add_space(join);
  add_budget(join);
  join->add_option("--pair", pair, "x,y (labels or indices)")->required();
  join->add_option("--target", target, "target scale")->required();
  join->add_option("--fine", fine, "fine scale the witness chain lives at")->required();
  join->add_option("--certificate", cert_path, "where a Yes certificate is written")->capture_default_str();

  auto* shortc = app.add_subcommand("short", "is a chain homotopic to the edge between its endpoints");
  add_space(shortc);
  add_budget(shortc);
  shortc->add_option("--chain", chain, "comma-separated labels or indices");
  shortc->add_option("--chain-file", cert_file, "json {\"chain\": [...], \"scale\": s, optional \"space\"}");
  shortc->add_option("--scale", scale, "scale of the homotopy");
  shortc->add_option("--against", against, "decide homotopy rel endpoints against this chain instead");
  shortc->add_option("--certificate", cert_path, "where a Yes certificate is written")->capture_default_str();

  auto* replayc = app.add_subcommand("replay", "re-verify a certificate or every certificate inside a report");
  replayc->add_option("certificate", map_path, "certificate or report json")->required();
  replayc->add_option("-o,--out", c.out, "report path (default stdout)");

  auto* ball = app.add_subcommand("ball", "bounded ball of chain classes from a basepoint");
  add_space(ball);
  add_budget(ball);
  ball->add_option("--scale", scale, "scale")->required();
  ball->add_option("--basepoint", basepoint, "label or index (default: first distinguished point)");
  ball->add_option("--radius", radius, "radius in chain steps")->capture_default_str();
  ball->add_option("--format", format, "json | dot")->check(CLI::IsMember({"json", "dot"}));

  auto* gallery = app.add_subcommand("gallery", "dump a gallery or file space as json");
  add_space(gallery);
  gallery->add_option("-o,--out", c.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    auto pick_basepoint = [&](const SpaceHandle& h) -> size_t {
      if (!basepoint.empty()) return index_of(h, basepoint);
      Str js;
      check(ucov_space_to_json(h.p, &js.p));
      const Json sj = Json::parse(js.get());
      const auto& d = sj["distinguished"];
      return d.empty() ? 0 : d.begin().value().get<size_t>();
    };

    if (*analyze) {
      SpaceHandle h;
      load_space(c, h);
      const auto lad = parse_ladder(ladder_spec, fetch_ladder([&](double* o, size_t cap, size_t* n) {
                                      return ucov_space_recommended_ladder(h.p, o, cap, n);
                                    }));
      Str js, text;
      check(ucov_analyze(h.p, lad.data(), lad.size(), pick_basepoint(h), g_scale, audit, &c.opts, &js.p, &text.p));
      write_out(c.out, format == "text" ? text.get() : js.get());
      return 0;
    }
    if (*cover) {
      ucov_map* m = nullptr;
      check(ucov_map_load(map_path.c_str(), &m));
      std::unique_ptr<ucov_map, void (*)(ucov_map*)> guard(m, ucov_map_free);
      const auto lad = parse_ladder(
          ladder_spec, fetch_ladder([&](double* o, size_t cap, size_t* n) { return ucov_map_ladder(m, o, cap, n); }));
      Str js;
      int verdict = UCOV_UNKNOWN;
      check(ucov_cover(m, lad.data(), lad.size(), &c.opts, &verdict, &js.p));
      write_out(c.out, js.get());
      return verdict_exit(verdict);
    }
    if (*join) {
      SpaceHandle h;
      load_space(c, h);
      const auto p = split(pair);
      if (p.size() != 2) throw Failure{kExitInput, "--pair needs exactly two points"};
      Str js;
      int verdict = UCOV_UNKNOWN;
      check(ucov_join(h.p, index_of(h, p[0]), index_of(h, p[1]), target, fine, &c.opts, &verdict, &js.p));
      Json report = Json::parse(js.get());
      externalize_certificate(report, cert_path);
      write_out(c.out, report.dump(2) + "\n");
      return verdict_exit(verdict);
    }
    if (*shortc) {
      SpaceHandle h;
      Json file;
      if (!cert_file.empty()) {
        try {
          file = Json::parse(slurp(cert_file));
        } catch (const Json::exception& e) {
          throw Failure{kExitInput, cert_file + ": " + e.what()};
        }
        if (file.contains("space") && c.gallery.empty() && c.space_file.empty()) {
          check(ucov_space_from_json(file["space"].dump().c_str(), &h.p));
        }
        if (file.contains("scale") && scale == 0) scale = file["scale"].get<double>();
      }
      if (!h.p) load_space(c, h);
      std::vector<size_t> seq;
      if (!chain.empty()) {
        seq = parse_chain(h, chain);
      } else if (file.contains("chain")) {
        for (const auto& x : file["chain"]) seq.push_back(index_of(h, x.is_string() ? x.get<std::string>() : x.dump()));
      } else {
        throw Failure{kExitInput, "give --chain or --chain-file"};
      }
      if (!(scale > 0)) throw Failure{kExitInput, "--scale must be positive"};
      Str js;
      int verdict = UCOV_UNKNOWN;
      if (against.empty()) {
        check(ucov_short(h.p, seq.data(), seq.size(), scale, &c.opts, &verdict, &js.p));
      } else {
        const auto other = parse_chain(h, against);
        check(ucov_homotopic(h.p, seq.data(), seq.size(), other.data(), other.size(), scale, &c.opts, &verdict, &js.p));
      }
      Json report = Json::parse(js.get());
      externalize_certificate(report, cert_path);
      write_out(c.out, report.dump(2) + "\n");
      return verdict_exit(verdict);
    }
    if (*replayc) {
      Json doc;
      try {
        doc = Json::parse(slurp(map_path));
      } catch (const Json::exception& e) {
        throw Failure{kExitCertificate, map_path + ": " + e.what()};
      }
      std::vector<const Json*> certs;
      collect_certificates(doc, certs);
      if (certs.empty()) throw Failure{kExitCertificate, map_path + ": no certificate found"};
      Json out;
      out["schema"] = 1;
      out["command"] = "replay";
      Json results = Json::array();
      bool all = true;
      for (const Json* cert : certs) {
        Str js;
        int ok = 0;
        const ucov_status st = ucov_replay(cert->dump().c_str(), &ok, &js.p);
        if (st != UCOV_OK) throw Failure{kExitCertificate, std::string("malformed certificate: ") + ucov_last_error()};
        Json r = Json::parse(js.get());
        r.erase("schema");
        r.erase("command");
        results.push_back(std::move(r));
        all = all && ok;
      }
      out["ok"] = all;
      out["certificates"] = std::move(results);
      write_out(c.out, out.dump(2) + "\n");
      return all ? 0 : kExitCertificate;
    }
    if (*ball) {
      SpaceHandle h;
      load_space(c, h);
      Str js, dot;
      check(ucov_ball(h.p, scale, pick_basepoint(h), radius, &c.opts, &js.p, &dot.p));
      write_out(c.out, format == "dot" ? dot.get() : js.get());
      return 0;
    }
    if (*gallery) {
      SpaceHandle h;
      load_space(c, h);
      Str js;
      check(ucov_space_to_json(h.p, &js.p));
      write_out(c.out, js.get());
      return 0;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
