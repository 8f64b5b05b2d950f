#pragma once

// Column-oriented result table and its CSV / JSON / SVG renderings.

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace frachq_cli {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;  // columns[0] is the abscissa
  std::vector<std::vector<Cell>> rows;

  /// Keeps the abscissa and the named columns, in the order given.
  /// Returns the names that do not exist.
  std::vector<std::string> select(const std::vector<std::string>& keep);
};

/// Numbers with %.9g, header row, '\n' line endings.
std::string to_csv(const Table& t);
/// {"columns": [...], "rows": [[...], ...]}, plus any extra members.
std::string to_json(const Table& t, const nlohmann::json& extra = nlohmann::json::object());
/// One polyline per numeric column against the abscissa.
std::string to_svg(const Table& t, const std::string& title);

std::string format_number(double v);

}  // namespace frachq_cli
