#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qprok/cdf.hpp"
#include "qprok/family.hpp"
#include "qprok/rational.hpp"

namespace qprok::cli {

/// Malformed input document or flag. `field` is a JSON path such as
/// "tails[0].a", empty when the problem is not tied to one field.
class InputError : public std::invalid_argument {
 public:
  InputError(const std::string& field, const std::string& what)
      : std::invalid_argument(field.empty() ? what : field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Command { Metrics, Indices, ProkhorovCheck, Theorem22, Report };
enum class Format { Csv, Markdown, SvgPlot };

Command parse_command(std::string_view name);
Format parse_format(std::string_view name);
const char* command_name(Command c);

struct RunConfig {
  Command command = Command::Indices;
  std::string input_path;
  Rational eps = rational(1, 100);
  std::size_t grid_depth = 64;
  Format format = Format::Csv;
  /// Empty means standard output. Required by `report`.
  std::string output_path;
  std::vector<Rational> gammas;  // empty means {1}
  std::vector<Rational> alphas;  // empty means {1/10}
  std::optional<Rational> window;
  std::optional<std::uint64_t> seed;

  /// Throws InputError on eps <= 0, grid_depth == 0, nonpositive gamma,
  /// alpha or window, or `report` without an output path.
  void validate() const;
};

/// "p/q" string or JSON integer.
Rational read_rational(const nlohmann::json& value, const std::string& field);
Cdf parse_cdf(const nlohmann::json& value, const std::string& field);
nlohmann::json serialize_cdf(const Cdf& f);

/// Parses and validates a family document. Throws InputError naming the
/// offending field.
FamilySpec parse_family_spec(std::string_view text);
/// Compact JSON accepted by parse_family_spec.
std::string serialize_family_spec(const FamilySpec& family);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string render_csv(const Table& table);
std::string render_markdown(const Table& table);

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Standalone SVG line chart, log2 x axis.
std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::vector<PlotSeries>& series);

/// Executes one command. Results go to `out` (or to config.output_path), a
/// one-line JSON error record to `err`. Returns 0 when every contract holds,
/// 1 on a contract failure, 2 on bad input.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qprok::cli
