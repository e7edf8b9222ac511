#include "gallery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ucov::gallery {

namespace {

using Point = std::vector<double>;

Point lerp(const Point& p, const Point& q, double t) {
  Point r(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) r[k] = p[k] + t * (q[k] - p[k]);
  return r;
}

double norm(const Point& p, const Point& q) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += (p[k] - q[k]) * (p[k] - q[k]);
  return std::sqrt(s);
}

Point hex_vertex(int k) {
  const double t = std::numbers::pi / 3.0 * k;
  return {std::cos(t), std::sin(t)};
}

// Appends `extra` equally spaced interior samples of segment p-q.
void densify(std::vector<std::string>& labels, std::vector<Point>& coords, const Point& p,
             const Point& q, const std::string& side, std::size_t extra) {
  for (std::size_t s = 1; s <= extra; ++s) {
    labels.push_back(side + "/" + std::to_string(s));
    coords.push_back(lerp(p, q, static_cast<double>(s) / static_cast<double>(extra + 1)));
  }
}

std::vector<double> parse_params(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      fail(ErrorKind::argument, "gallery parameter '" + tok + "' is not a number");
    }
  }
  return out;
}

std::size_t as_count(double v, const char* what) {
  if (!(v >= 0.0) || std::floor(v) != v) fail(ErrorKind::argument, std::string(what) + " must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

FiniteSpace polygon(std::size_t n, double radius) {
  if (n < 1 || !(radius > 0.0)) fail(ErrorKind::argument, "polygon needs n >= 1 and radius > 0");
  std::vector<std::string> labels;
  std::vector<Point> coords;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    labels.push_back("p" + std::to_string(k));
    coords.push_back({radius * std::cos(t), radius * std::sin(t)});
  }
  auto s = FiniteSpace::from_coords(std::move(labels), std::move(coords));
  s.set_name("polygon:" + std::to_string(n) + "," + std::to_string(radius));
  s.set_distinguished({{"base", 0}});
  if (n >= 4) {
    // Between the side and the next chord: the Rips graph is the n-cycle.
    const double side = 2.0 * radius * std::sin(std::numbers::pi / static_cast<double>(n));
    const double chord2 = 2.0 * radius * std::sin(2.0 * std::numbers::pi / static_cast<double>(n));
    s.set_recommended_ladder({side + 0.75 * (chord2 - side), side + 0.25 * (chord2 - side)});
  }
  return s;
}

FiniteSpace hexagon_ex72(std::size_t extra_per_side) {
  // a..f counterclockwise from a = (1,0); the side a-b is the removed one.
  const std::vector<std::string> names{"a", "b", "c", "d", "e", "f"};
  std::vector<std::string> labels = names;
  std::vector<Point> coords;
  for (int k = 0; k < 6; ++k) coords.push_back(hex_vertex(k));
  for (int k = 1; k < 6; ++k) {
    const int next = (k + 1) % 6;
    densify(labels, coords, hex_vertex(k), hex_vertex(next), names[k] + names[next], extra_per_side);
  }
  auto s = FiniteSpace::from_coords(std::move(labels), std::move(coords));
  s.set_name("hexagon_ex72:" + std::to_string(extra_per_side));
  s.set_distinguished({{"a", 0}, {"b", 1}});
  if (extra_per_side == 0) {
    s.set_recommended_ladder({3.0, 1.0});
  } else {
    // The finest scale sees only the retained arc.
    s.set_recommended_ladder({3.0, 1.0, 1.3 / static_cast<double>(extra_per_side + 1)});
  }
  return s;
}

FiniteSpace hexagon_ex73(std::size_t extra_per_side) {
  const double h = std::sqrt(3.0) / 2.0;
  const std::vector<std::string> planar{"a", "b", "h2", "h3", "h4", "h5"};
  std::vector<std::string> labels = planar;
  std::vector<Point> coords;
  for (int k = 0; k < 6; ++k) {
    auto v = hex_vertex(k);
    coords.push_back({v[0], v[1], 0.0});
  }
  labels.push_back("c");
  coords.push_back({0.0, 0.0, 0.0});
  // Vertical hexagon over a-c in the xz-plane: c, a, v1, v2, v3, v4.
  const std::vector<Point> vertical{{1.0, 0.0, 0.0}, {1.5, 0.0, h}, {1.0, 0.0, 2.0 * h},
                                    {0.0, 0.0, 2.0 * h}, {-0.5, 0.0, h}, {0.0, 0.0, 0.0}};
  for (int k = 1; k <= 4; ++k) {
    labels.push_back("v" + std::to_string(k));
    coords.push_back(vertical[k]);
  }
  // Planar arc b-h2-...-h5-a (side a-b removed).
  for (int k = 1; k < 6; ++k) {
    const int next = (k + 1) % 6;
    densify(labels, coords, coords[k], coords[next], planar[k] + planar[next], extra_per_side);
  }
  // Vertical arc a-v1-...-v4-c (bottom a-c removed).
  const std::vector<std::string> vnames{"a", "v1", "v2", "v3", "v4", "c"};
  for (int k = 0; k < 5; ++k)
    densify(labels, coords, vertical[k], vertical[k + 1], vnames[k] + vnames[k + 1], extra_per_side);

  auto s = FiniteSpace::from_coords(std::move(labels), std::move(coords));
  s.set_name("hexagon_ex73:" + std::to_string(extra_per_side));
  s.set_distinguished({{"a", 0}, {"b", 1}, {"c", 6}});
  if (extra_per_side == 0) {
    s.set_recommended_ladder({1.0});
  } else {
    s.set_recommended_ladder({1.0, 1.3 / static_cast<double>(extra_per_side + 1)});
  }
  return s;
}

FiniteSpace solenoid(unsigned stages, std::size_t samples_per_winding, double major, double minor) {
  if (stages < 1 || stages > 12) fail(ErrorKind::argument, "solenoid needs 1 <= K <= 12");
  if (samples_per_winding < 8) fail(ErrorKind::argument, "solenoid needs at least 8 samples per winding");
  if (!(minor > 0.0) || !(major > 0.0)) fail(ErrorKind::argument, "solenoid radii must be positive");
  constexpr double shrink = 0.35;
  std::vector<double> radii(stages + 1, 0.0);  // radii[i] for layer i >= 1
  radii[1] = minor;
  for (unsigned i = 2; i <= stages; ++i) radii[i] = radii[i - 1] * shrink;
  double tube = 0.0;
  for (double r : radii) tube += r;
  if (!(tube < major)) fail(ErrorKind::argument, "solenoid needs the tube inside the torus (r < R)");

  const std::size_t windings = std::size_t{1} << stages;
  const std::size_t n = samples_per_winding * windings;
  std::vector<std::string> labels;
  std::vector<Point> coords;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples_per_winding);
    double rho = major, z = 0.0;
    for (unsigned i = 1; i <= stages; ++i) {
      const double phase = s / static_cast<double>(std::size_t{1} << i);
      rho += radii[i] * std::cos(phase);
      z += radii[i] * std::sin(phase);
    }
    labels.push_back("s" + std::to_string(k));
    coords.push_back({rho * std::cos(s), rho * std::sin(s), z});
  }

  double step = 0.0;
  for (std::size_t k = 0; k < n; ++k) step = std::max(step, norm(coords[k], coords[(k + 1) % n]));

  // Stage j merges strands that differ only in layers deeper than j and keeps
  // strands separated whose layer-<=j phases differ.
  std::vector<double> ladder;
  for (unsigned j = 0; j <= stages; ++j) {
    double deep = 0.0;
    for (unsigned l = j + 1; l <= stages; ++l) deep += radii[l];
    const double merge = std::hypot(2.0 * deep, step);
    if (j == 0) {
      ladder.push_back(1.1 * merge);
      continue;
    }
    const double sep = 2.0 * radii[j] - 2.0 * deep;
    if (!(merge < sep))
      fail(ErrorKind::argument, "solenoid sampling too coarse to resolve stage " + std::to_string(j));
    ladder.push_back(0.5 * (merge + sep));
  }

  auto sp = FiniteSpace::from_coords(std::move(labels), std::move(coords));
  std::ostringstream name;
  name << "solenoid:" << stages << "," << samples_per_winding << "," << major << "," << minor;
  sp.set_name(name.str());
  sp.set_distinguished({{"base", 0}});
  sp.set_recommended_ladder(std::move(ladder));
  return sp;
}

FiniteSpace hawaiian(std::size_t circles, std::size_t samples) {
  if (circles < 1 || samples < 8) fail(ErrorKind::argument, "hawaiian needs m >= 1 and samples >= 8");
  std::vector<std::string> labels{"w"};
  std::vector<Point> coords{{0.0, 0.0}};
  for (std::size_t i = 1; i <= circles; ++i) {
    const double r = 1.0 / static_cast<double>(i);
    for (std::size_t k = 1; k < samples; ++k) {
      const double t = std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples);
      labels.push_back("c" + std::to_string(i) + "/" + std::to_string(k));
      coords.push_back({r + r * std::cos(t), r * std::sin(t)});
    }
  }
  auto s = FiniteSpace::from_coords(std::move(labels), std::move(coords));
  s.set_name("hawaiian:" + std::to_string(circles) + "," + std::to_string(samples));
  s.set_distinguished({{"wedge", 0}});
  // At the j-th threshold circles 1..j survive and the smaller ones fill in.
  std::vector<double> ladder;
  for (std::size_t j = 1; j <= circles; ++j)
    ladder.push_back(0.5 * std::sqrt(3.0) * (1.0 / static_cast<double>(j) + 1.0 / static_cast<double>(j + 1)));
  s.set_recommended_ladder(std::move(ladder));
  return s;
}

FiniteSpace by_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::vector<double> p = colon == std::string::npos ? std::vector<double>{} : parse_params(spec.substr(colon + 1));
  auto arg = [&](std::size_t i, double fallback) { return i < p.size() ? p[i] : fallback; };
  if (name == "polygon") {
    if (p.empty()) fail(ErrorKind::argument, "polygon needs n[,r]");
    return polygon(as_count(p[0], "polygon n"), arg(1, 1.0));
  }
  if (name == "hexagon_ex72") return hexagon_ex72(as_count(arg(0, 0), "densification"));
  if (name == "hexagon_ex73") return hexagon_ex73(as_count(arg(0, 0), "densification"));
  if (name == "solenoid")
    return solenoid(static_cast<unsigned>(as_count(arg(0, 2), "solenoid K")),
                    as_count(arg(1, 64), "samples per winding"), arg(2, 4.0), arg(3, 1.0));
  if (name == "hawaiian") return hawaiian(as_count(arg(0, 3), "circles"), as_count(arg(1, 24), "samples"));
  fail(ErrorKind::argument, "unknown gallery space '" + name + "'");
}

}  // namespace ucov::gallery
