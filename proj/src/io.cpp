#include "io.hpp"

#include <fstream>
#include <sstream>

#include "gallery.hpp"

namespace ucov {

namespace {

struct CsvCell {
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<std::vector<CsvCell>> split_csv(const std::string& text) {
  std::vector<std::vector<CsvCell>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<CsvCell> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      cell = b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1);
      row.push_back({cell, lineno, start + 1});
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double to_double(const CsvCell& cell) {
  try {
    std::size_t used = 0;
    double v = std::stod(cell.text, &used);
    if (used == cell.text.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::parse, "line " + std::to_string(cell.line) + ", column " + std::to_string(cell.column) +
                             ": expected a number, found '" + cell.text + "'");
}

}  // namespace

SpaceFormat parse_space_format(const std::string& name) {
  if (name == "json") return SpaceFormat::json;
  if (name == "csv-matrix") return SpaceFormat::csv_matrix;
  if (name == "csv-points") return SpaceFormat::csv_points;
  fail(ErrorKind::argument, "unknown space format '" + name + "'");
}

SpaceFormat guess_space_format(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return SpaceFormat::json;
  return SpaceFormat::csv_points;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorKind::io, "write to '" + path + "' failed");
}

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::parse, origin + ": " + e.what());
  }
}

FiniteSpace parse_space_csv_points(const std::string& text) {
  auto rows = split_csv(text);
  if (rows.size() < 2) fail(ErrorKind::parse, "csv-points needs a header and at least one row");
  const auto& header = rows.front();
  if (header.size() < 2 || header[0].text != "label")
    fail(ErrorKind::parse, "line 1, column 1: header must be 'label,x1,...,xd'");
  const std::size_t dim = header.size() - 1;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> coords;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != dim + 1)
      fail(ErrorKind::parse, "line " + std::to_string(row.front().line) + ": expected " +
                                 std::to_string(dim + 1) + " fields, found " + std::to_string(row.size()));
    labels.push_back(row[0].text);
    std::vector<double> c;
    for (std::size_t k = 1; k < row.size(); ++k) c.push_back(to_double(row[k]));
    coords.push_back(std::move(c));
  }
  return FiniteSpace::from_coords(std::move(labels), std::move(coords));
}

FiniteSpace parse_space_csv_matrix(const std::string& text) {
  auto rows = split_csv(text);
  if (rows.empty()) fail(ErrorKind::parse, "csv-matrix is empty");
  std::vector<std::string> labels;
  for (const auto& c : rows.front()) labels.push_back(c.text);
  const std::size_t n = labels.size();
  if (rows.size() != n + 1)
    fail(ErrorKind::parse, "csv-matrix has " + std::to_string(rows.size() - 1) + " matrix rows for " +
                               std::to_string(n) + " labels");
  std::vector<double> dist;
  for (std::size_t r = 1; r <= n; ++r) {
    if (rows[r].size() != n)
      fail(ErrorKind::parse, "line " + std::to_string(rows[r].front().line) + ": expected " +
                                 std::to_string(n) + " entries, found " + std::to_string(rows[r].size()));
    for (const auto& c : rows[r]) dist.push_back(to_double(c));
  }
  return FiniteSpace::from_matrix(std::move(labels), std::move(dist));
}

FiniteSpace load_space(const std::string& path, SpaceFormat format) {
  const std::string text = read_file(path);
  switch (format) {
    case SpaceFormat::json:
      return space_from_json(parse_json(text, path));
    case SpaceFormat::csv_matrix:
      return parse_space_csv_matrix(text);
    case SpaceFormat::csv_points:
      return parse_space_csv_points(text);
  }
  fail(ErrorKind::argument, "unknown format");
}

Json space_to_json(const FiniteSpace& space) {
  Json j;
  j["schema"] = kSchemaVersion;
  if (!space.name().empty()) j["name"] = space.name();
  j["labels"] = space.labels();
  if (space.coords()) {
    j["coords"] = *space.coords();
  } else {
    Json rows = Json::array();
    for (Index i = 0; i < space.size(); ++i) {
      Json row = Json::array();
      for (Index k = 0; k < space.size(); ++k) row.push_back(space.dist(i, k));
      rows.push_back(std::move(row));
    }
    j["dist"] = std::move(rows);
  }
  Json d = Json::object();
  for (const auto& [name, idx] : space.distinguished()) d[name] = idx;
  j["distinguished"] = std::move(d);
  if (!space.recommended_ladder().empty()) j["recommended_ladder"] = space.recommended_ladder();
  return j;
}

FiniteSpace space_from_json(const Json& j) {
  try {
    if (!j.is_object()) fail(ErrorKind::parse, "space json must be an object");
    auto labels = j.at("labels").get<std::vector<std::string>>();
    const bool has_coords = j.contains("coords"), has_dist = j.contains("dist");
    if (has_coords == has_dist) fail(ErrorKind::parse, "space json needs exactly one of 'coords' and 'dist'");
    FiniteSpace s;
    if (has_coords) {
      s = FiniteSpace::from_coords(std::move(labels), j.at("coords").get<std::vector<std::vector<double>>>());
    } else {
      auto rows = j.at("dist").get<std::vector<std::vector<double>>>();
      std::vector<double> flat;
      for (const auto& r : rows) {
        if (r.size() != rows.size()) fail(ErrorKind::validation, "distance matrix is not square");
        flat.insert(flat.end(), r.begin(), r.end());
      }
      s = FiniteSpace::from_matrix(std::move(labels), std::move(flat));
    }
    if (j.contains("name")) s.set_name(j.at("name").get<std::string>());
    if (j.contains("distinguished")) {
      std::vector<std::pair<std::string, Index>> d;
      for (const auto& [k, v] : j.at("distinguished").items()) d.emplace_back(k, v.get<Index>());
      s.set_distinguished(std::move(d));
    }
    if (j.contains("recommended_ladder"))
      s.set_recommended_ladder(j.at("recommended_ladder").get<std::vector<double>>());
    return s;
  } catch (const Json::exception& e) {
    fail(ErrorKind::parse, std::string("space json: ") + e.what());
  }
}

FiniteSpace space_from_json_or_gallery(const Json& j) {
  if (j.is_object() && j.contains("gallery")) return gallery::by_spec(j.at("gallery").get<std::string>());
  return space_from_json(j);
}

SpaceMap map_from_json(const Json& j) {
  try {
    auto source = std::make_shared<const FiniteSpace>(space_from_json_or_gallery(j.at("source")));
    auto target = std::make_shared<const FiniteSpace>(space_from_json_or_gallery(j.at("target")));
    std::vector<Index> assign;
    for (const auto& a : j.at("assign")) {
      if (a.is_string()) {
        assign.push_back(target->resolve(a.get<std::string>()));
      } else {
        const auto v = a.get<long long>();
        if (v < 0) fail(ErrorKind::validation, "negative assignment entry");
        assign.push_back(static_cast<Index>(v));
      }
    }
    return SpaceMap(std::move(source), std::move(target), std::move(assign));
  } catch (const Json::exception& e) {
    fail(ErrorKind::parse, std::string("map json: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::argument) fail(ErrorKind::validation, e.what());
    throw;
  }
}

Json map_to_json(const SpaceMap& f) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["source"] = space_to_json(f.source());
  j["target"] = space_to_json(f.target());
  j["assign"] = f.assign();
  return j;
}

Json integer_to_json(const Integer& v) {
  if (v.fits_slong_p()) return static_cast<long long>(v.get_si());
  return v.get_str();
}

Json intvector_to_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(integer_to_json(x));
  return a;
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    Integer v;
    if (v.set_str(j.get<std::string>(), 10) == 0) return v;
  }
  fail(ErrorKind::parse, "expected an integer, found " + j.dump());
}

Json entourage_to_json(const Entourage& e) {
  if (!e.is_symmetric()) fail(ErrorKind::argument, "only symmetric relations serialize as pair lists");
  Json pairs = Json::array();
  for (auto [i, j] : e.edges()) pairs.push_back({i, j});
  Json out;
  out["n"] = e.size();
  out["pairs"] = std::move(pairs);
  return out;
}

Entourage entourage_from_json(const Json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<IndexPair> pairs;
    for (const auto& p : j.at("pairs")) {
      if (!p.is_array() || p.size() != 2) fail(ErrorKind::parse, "entourage pair must be [i, j]");
      const auto a = p[0].get<Index>(), b = p[1].get<Index>();
      if (a >= n || b >= n) fail(ErrorKind::validation, "entourage pair " + p.dump() + " out of range");
      pairs.emplace_back(a, b);
    }
    return Entourage::from_pairs(n, pairs);
  } catch (const Json::exception& e) {
    fail(ErrorKind::parse, std::string("entourage json: ") + e.what());
  }
}

}  // namespace ucov
