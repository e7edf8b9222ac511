#pragma once

#include <string>

#include <json.hpp>

#include "intmat.hpp"
#include "space.hpp"

namespace ucov {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class SpaceFormat { json, csv_matrix, csv_points };

SpaceFormat parse_space_format(const std::string& name);
/// Guesses from the extension: .json, otherwise csv-points.
SpaceFormat guess_space_format(const std::string& path);

FiniteSpace load_space(const std::string& path, SpaceFormat format);
FiniteSpace parse_space_csv_points(const std::string& text);
FiniteSpace parse_space_csv_matrix(const std::string& text);

Json space_to_json(const FiniteSpace& space);
FiniteSpace space_from_json(const Json& j);

/// Accepts {"gallery": "spec"} or an inline space object.
FiniteSpace space_from_json_or_gallery(const Json& j);

/// {"source": space, "target": space, "assign": [indices or labels]}
SpaceMap map_from_json(const Json& j);
Json map_to_json(const SpaceMap& f);

/// Integers that fit in 64 bits become JSON numbers, larger ones strings.
Json integer_to_json(const Integer& v);
Json intvector_to_json(const IntVector& v);
Integer integer_from_json(const Json& j);

/// {"n": n, "pairs": [[i, j], ...]} listing i<j; the relation must be symmetric.
Json entourage_to_json(const Entourage& e);
Entourage entourage_from_json(const Json& j);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);
Json parse_json(const std::string& text, const std::string& origin);

}  // namespace ucov
