#include "qprok/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "qprok/approach.hpp"
#include "qprok/distances.hpp"
#include "qprok/indices.hpp"

namespace qprok::cli {

using nlohmann::json;

Command parse_command(std::string_view name) {
  if (name == "metrics") return Command::Metrics;
  if (name == "indices") return Command::Indices;
  if (name == "prokhorov-check") return Command::ProkhorovCheck;
  if (name == "theorem22") return Command::Theorem22;
  if (name == "report") return Command::Report;
  throw InputError("command", "unknown command '" + std::string(name) + "'");
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "markdown") return Format::Markdown;
  if (name == "svg-plot") return Format::SvgPlot;
  throw InputError("format", "unknown format '" + std::string(name) +
                                 "' (expected csv, markdown or svg-plot)");
}

const char* command_name(Command c) {
  switch (c) {
    case Command::Metrics:
      return "metrics";
    case Command::Indices:
      return "indices";
    case Command::ProkhorovCheck:
      return "prokhorov-check";
    case Command::Theorem22:
      return "theorem22";
    case Command::Report:
      return "report";
  }
  return "?";
}

void RunConfig::validate() const {
  if (eps <= 0) throw InputError("eps", "must be positive, got " + to_string(eps));
  if (grid_depth == 0) throw InputError("grid-depth", "must be at least 1");
  for (const auto& g : gammas) {
    if (g <= 0) throw InputError("gamma", "must be positive, got " + to_string(g));
  }
  for (const auto& a : alphas) {
    if (a <= 0) throw InputError("alpha", "must be positive, got " + to_string(a));
  }
  if (window && *window <= 0) throw InputError("window", "must be positive");
  if (command == Command::Report && output_path.empty()) {
    throw InputError("out", "report needs an output path");
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

void expect_object(const json& v, const std::string& field) {
  if (!v.is_object()) throw InputError(field, "expected an object");
}

void expect_keys(const json& v, const std::string& field,
                 std::initializer_list<std::string_view> allowed) {
  expect_object(v, field);
  for (const auto& [key, _] : v.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InputError(field + "." + key, "unknown field");
    }
  }
}

const json& require(const json& v, const std::string& field, const char* key) {
  if (!v.contains(key)) throw InputError(field + "." + key, "missing");
  return v.at(key);
}

std::string item(const std::string& field, std::size_t i) {
  return field + "[" + std::to_string(i) + "]";
}

// Wraps constructor failures so the message names the field.
template <class Fn>
Cdf build(const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const InputError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(field, e.what());
  } catch (const std::domain_error& e) {
    throw InputError(field, e.what());
  }
}

Schedule parse_schedule(const json& v, const std::string& field) {
  try {
    if (v.is_array()) {
      std::vector<Rational> values;
      for (std::size_t i = 0; i < v.size(); ++i) values.push_back(read_rational(v[i], item(field, i)));
      return Schedule::explicit_values(std::move(values));
    }
    if (!v.is_string()) throw InputError(field, "expected \"n\", \"<c>n\", \"1/n\" or a list");
    const std::string s = v.get<std::string>();
    if (s == "1/n") return Schedule::reciprocal();
    if (s.empty() || s.back() != 'n') {
      throw InputError(field, "expected \"n\", \"<c>n\", \"1/n\" or a list, got \"" + s + "\"");
    }
    const std::string coeff = s.substr(0, s.size() - 1);
    if (coeff.empty()) return Schedule::linear(1);
    return Schedule::linear(qprok::parse_rational(coeff));
  } catch (const InputError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(field, e.what());
  }
}

TailTemplate parse_template(const json& v, const std::string& field) {
  if (!v.is_string()) throw InputError(field, "expected a template name");
  const std::string s = v.get<std::string>();
  for (auto t : {TailTemplate::ShiftEscape, TailTemplate::MixtureEscape, TailTemplate::Constant,
                 TailTemplate::ShiftConverge}) {
    if (s == template_name(t)) return t;
  }
  throw InputError(field, "unknown template '" + s + "'");
}

ParametricTail parse_tail(const json& v, const std::string& field) {
  expect_keys(v, field, {"template", "base", "a", "t", "horizon"});
  ParametricTail tail{parse_template(require(v, field, "template"), field + ".template"),
                      parse_cdf(require(v, field, "base"), field + ".base")};
  if (v.contains("a")) {
    tail.a = read_rational(v.at("a"), field + ".a");
  } else if (tail.kind == TailTemplate::MixtureEscape) {
    throw InputError(field + ".a", "missing");
  }
  if (v.contains("t")) tail.t = parse_schedule(v.at("t"), field + ".t");
  if (v.contains("horizon")) {
    const json& h = v.at("horizon");
    if (!h.is_number_integer() || h.get<long long>() < 1) {
      throw InputError(field + ".horizon", "expected a positive integer");
    }
    tail.horizon = h.get<std::size_t>();
  }
  try {
    tail.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(field, e.what());
  }
  return tail;
}

json rational_json(const Rational& r) { return to_string(r); }

json serialize_schedule(const Schedule& s) {
  if (s.offset() != 0) throw std::logic_error("cannot serialize a shifted schedule");
  switch (s.kind()) {
    case Schedule::Kind::Linear:
      return s.coefficient() == 1 ? std::string("n") : to_string(s.coefficient()) + "n";
    case Schedule::Kind::Reciprocal:
      return "1/n";
    case Schedule::Kind::Explicit: {
      json out = json::array();
      for (const auto& v : s.values()) out.push_back(rational_json(v));
      return out;
    }
  }
  throw std::logic_error("unknown schedule kind");
}

}  // namespace

Rational read_rational(const json& value, const std::string& field) {
  if (value.is_number_integer()) {
    if (value.is_number_unsigned()) return Rational(std::to_string(value.get<unsigned long long>()));
    return Rational(std::to_string(value.get<long long>()));
  }
  if (value.is_number_float()) {
    throw InputError(field, "floating-point numbers are not accepted; write \"p/q\"");
  }
  if (!value.is_string()) throw InputError(field, "expected a rational \"p/q\" or an integer");
  try {
    return qprok::parse_rational(value.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(field, e.what());
  }
}

Cdf parse_cdf(const json& v, const std::string& field) {
  expect_object(v, field);
  if (v.size() != 1) {
    throw InputError(field, "expected exactly one of dirac, uniform, mixture, shift, convolve");
  }
  const auto& [key, body] = *v.items().begin();
  const std::string sub = field + "." + key;
  if (key == "dirac") return dirac(read_rational(body, sub));
  if (key == "uniform") {
    expect_keys(body, sub, {"a", "b"});
    const Rational a = read_rational(require(body, sub, "a"), sub + ".a");
    const Rational b = read_rational(require(body, sub, "b"), sub + ".b");
    return build(sub, [&] { return uniform(a, b); });
  }
  if (key == "mixture") {
    expect_keys(body, sub, {"weights", "parts"});
    const json& w = require(body, sub, "weights");
    const json& p = require(body, sub, "parts");
    if (!w.is_array()) throw InputError(sub + ".weights", "expected a list");
    if (!p.is_array()) throw InputError(sub + ".parts", "expected a list");
    std::vector<Rational> weights;
    std::vector<Cdf> parts;
    for (std::size_t i = 0; i < w.size(); ++i) {
      weights.push_back(read_rational(w[i], item(sub + ".weights", i)));
    }
    for (std::size_t i = 0; i < p.size(); ++i) parts.push_back(parse_cdf(p[i], item(sub + ".parts", i)));
    return build(sub, [&] { return mixture(weights, parts); });
  }
  if (key == "shift") {
    expect_keys(body, sub, {"base", "t"});
    return shift(parse_cdf(require(body, sub, "base"), sub + ".base"),
                 read_rational(require(body, sub, "t"), sub + ".t"));
  }
  if (key == "convolve") {
    expect_keys(body, sub, {"f", "g"});
    const Cdf f = parse_cdf(require(body, sub, "f"), sub + ".f");
    const Cdf g = parse_cdf(require(body, sub, "g"), sub + ".g");
    return build(sub, [&] { return convolve(f, g); });
  }
  throw InputError(sub, "unknown constructor");
}

json serialize_cdf(const Cdf& f) {
  const auto& jumps = f.jumps();
  const auto& segs = f.segments();
  if (segs.empty() && jumps.size() == 1) return {{"dirac", rational_json(jumps[0].location)}};
  if (jumps.empty() && segs.size() == 1) {
    return {{"uniform", {{"a", rational_json(segs[0].left)}, {"b", rational_json(segs[0].right)}}}};
  }
  json weights = json::array();
  json parts = json::array();
  for (const auto& j : jumps) {
    weights.push_back(rational_json(j.mass));
    parts.push_back({{"dirac", rational_json(j.location)}});
  }
  for (const auto& s : segs) {
    weights.push_back(rational_json(s.mass));
    parts.push_back({{"uniform", {{"a", rational_json(s.left)}, {"b", rational_json(s.right)}}}});
  }
  return {{"mixture", {{"weights", weights}, {"parts", parts}}}};
}

FamilySpec parse_family_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("", std::string("malformed JSON: ") + e.what());
  }
  expect_keys(doc, "$", {"explicit", "tails"});
  FamilySpec family;
  if (doc.contains("explicit")) {
    const json& ex = doc.at("explicit");
    if (!ex.is_array()) throw InputError("explicit", "expected a list");
    for (std::size_t i = 0; i < ex.size(); ++i) {
      family.explicit_members.push_back(parse_cdf(ex[i], item("explicit", i)));
    }
  }
  if (doc.contains("tails")) {
    const json& tl = doc.at("tails");
    if (!tl.is_array()) throw InputError("tails", "expected a list");
    for (std::size_t i = 0; i < tl.size(); ++i) family.tails.push_back(parse_tail(tl[i], item("tails", i)));
  }
  if (family.empty()) throw InputError("", "family has no explicit members and no tails");
  return family;
}

std::string serialize_family_spec(const FamilySpec& family) {
  json doc = json::object();
  if (!family.explicit_members.empty()) {
    json ex = json::array();
    for (const auto& f : family.explicit_members) ex.push_back(serialize_cdf(f));
    doc["explicit"] = ex;
  }
  if (!family.tails.empty()) {
    json tl = json::array();
    for (const auto& t : family.tails) {
      tl.push_back({{"template", template_name(t.kind)},
                    {"base", serialize_cdf(t.base)},
                    {"a", rational_json(t.a)},
                    {"t", serialize_schedule(t.t)},
                    {"horizon", t.horizon}});
    }
    doc["tails"] = tl;
  }
  return doc.dump();
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

std::string fmt(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2f", v);
  return buf.data();
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_csv(const Table& table) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_cell(cells[i]);
    os << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return os.str();
}

std::string render_markdown(const Table& table) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    os << '|';
    for (const auto& c : cells) os << ' ' << md_cell(c) << " |";
    os << '\n';
  };
  line(table.header);
  os << '|';
  for (std::size_t i = 0; i < table.header.size(); ++i) os << " --- |";
  os << '\n';
  for (const auto& r : table.rows) line(r);
  return os.str();
}

std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::vector<PlotSeries>& series) {
  constexpr double kW = 640, kH = 400, kLeft = 60, kRight = 170, kTop = 40, kBottom = 50;
  const std::array<const char*, 6> colors{"#1f77b4", "#d62728", "#2ca02c",
                                          "#9467bd", "#ff7f0e", "#8c564b"};
  double x_max = 1;
  double y_max = 1;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x_max = std::max(x_max, x);
      y_max = std::max(y_max, y);
    }
  }
  const double lx_max = std::max(1.0, std::log2(x_max));
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;
  auto px = [&](double x) { return kLeft + pw * std::log2(std::max(1.0, x)) / lx_max; };
  auto py = [&](double y) { return kTop + ph * (1 - y / y_max); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kW) << "\" height=\""
     << fmt(kH) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fmt(kW / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
     << xml_escape(title) << "</text>\n";
  os << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop + ph) << "\" x2=\""
     << fmt(kLeft + pw) << "\" y2=\"" << fmt(kTop + ph) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(kLeft)
     << "\" y2=\"" << fmt(kTop + ph) << "\" stroke=\"black\"/>\n";
  for (double x = 1; x <= x_max * 1.0000001; x *= 2) {
    os << "<text x=\"" << fmt(px(x)) << "\" y=\"" << fmt(kTop + ph + 16)
       << "\" text-anchor=\"middle\">" << static_cast<long long>(x) << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double y = y_max * i / 4;
    os << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(py(y) + 4)
       << "\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
    os << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(py(y)) << "\" x2=\"" << fmt(kLeft + pw)
       << "\" y2=\"" << fmt(py(y)) << "\" stroke=\"#dddddd\"/>\n";
  }
  os << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kH - 10)
     << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = colors[i % colors.size()];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < series[i].points.size(); ++k) {
      const auto& [x, y] = series[i].points[k];
      os << (k ? " " : "") << fmt(px(x)) << ',' << fmt(py(y));
    }
    os << "\"/>\n";
    const double ly = kTop + 18 * static_cast<double>(i);
    os << "<line x1=\"" << fmt(kW - kRight + 10) << "\" y1=\"" << fmt(ly) << "\" x2=\""
       << fmt(kW - kRight + 30) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fmt(kW - kRight + 36) << "\" y=\"" << fmt(ly + 4) << "\">"
       << xml_escape(series[i].label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Commands

namespace {

struct Labeled {
  std::string label;
  Cdf cdf;
};

std::vector<Labeled> metric_members(const FamilySpec& family) {
  std::vector<Labeled> out;
  for (std::size_t i = 0; i < family.explicit_members.size(); ++i) {
    out.push_back({item("explicit", i), family.explicit_members[i]});
  }
  for (std::size_t i = 0; i < family.tails.size(); ++i) {
    const auto& tail = family.tails[i];
    for (std::size_t n = 1; n <= std::min<std::size_t>(3, tail.horizon); ++n) {
      out.push_back({item("tails", i) + "[n=" + std::to_string(n) + "]", tail.member(n)});
    }
  }
  return out;
}

std::vector<std::string> run_labels(const FamilySpec& family) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < family.explicit_members.size(); ++i) out.push_back(item("explicit", i));
  for (std::size_t i = 0; i < family.tails.size(); ++i) {
    out.push_back(item("tails", i));
    if (family.tails[i].horizon / 2 > 1) {
      out.push_back(item("tails", i) + " from n=" + std::to_string(family.tails[i].horizon / 2));
    }
  }
  return out;
}

struct Section {
  std::string title;
  Table table;
  std::vector<std::string> failures;  // violated contracts
};

Section metrics_section(const FamilySpec& family, const RunConfig& cfg) {
  const std::vector<Rational> gammas = cfg.gammas.empty() ? std::vector<Rational>{1} : cfg.gammas;
  const std::vector<Rational> alphas =
      cfg.alphas.empty() ? std::vector<Rational>{rational(1, 10)} : cfg.alphas;
  Section s{"Pairwise distances", {{"f", "g", "D_u"}, {}}, {}};
  for (const auto& g : gammas) s.table.header.push_back("L_" + to_string(g));
  for (const auto& a : alphas) s.table.header.push_back("phi_" + to_string(a));

  const auto members = metric_members(family);
  for (const auto& f : members) {
    for (const auto& g : members) {
      if (&f == &g) continue;
      const Rational du = uniform_distance(f.cdf, g.cdf);
      std::vector<std::string> row{f.label, g.label, to_string(du)};
      for (const auto& gamma : gammas) {
        const Rational l = levy(gamma, f.cdf, g.cdf);
        if (l > du) {
          s.failures.push_back("L_" + to_string(gamma) + "(" + f.label + ", " + g.label +
                               ") = " + to_string(l) + " exceeds D_u = " + to_string(du));
        }
        row.push_back(to_string(l));
      }
      for (const auto& alpha : alphas) {
        const Rational p = phi(f.cdf, alpha, g.cdf);
        if (p > du) {
          s.failures.push_back("phi_" + to_string(alpha) + "(" + f.label + ", " + g.label +
                               ") = " + to_string(p) + " exceeds D_u = " + to_string(du));
        }
        row.push_back(to_string(p));
      }
      s.table.rows.push_back(std::move(row));
    }
  }
  return s;
}

struct Convergence {
  std::vector<std::size_t> depths;
  std::vector<Rational> lower;
  Rational upper;
  Rational chi;
};

struct IndicesData {
  Section section;
  Convergence convergence;
};

IndicesData indices_section(const FamilySpec& family, const RunConfig& cfg) {
  IndicesData d{{"Escape index and limit operators", {{"quantity", "subject", "lower", "upper"}, {}}, {}},
                {}};
  auto& rows = d.section.table.rows;
  const Rational chi = escape_index(family);
  const std::string tight = chi == 0 ? "true" : "false";
  rows.push_back({"escape_index", "family", to_string(chi), to_string(chi)});
  rows.push_back({"tight", "family", tight, tight});
  if (cfg.window) {
    const Rational v = family.escape_profile(*cfg.window);
    rows.push_back({"escape_profile", "M=" + to_string(*cfg.window), to_string(v), to_string(v)});
  }

  const Rational m = family.settled_window();
  const auto runs = bracket_runs(family);
  const auto labels = run_labels(family);
  std::vector<std::size_t> depths;
  for (std::size_t k = 1; k < cfg.grid_depth; k *= 2) depths.push_back(k);
  depths.push_back(cfg.grid_depth);
  d.convergence = {depths, std::vector<Rational>(depths.size(), Rational(0)), 0, chi};

  for (std::size_t r = 0; r < runs.size(); ++r) {
    const HellyResult h = helly_select(runs[r], {Rational(-m), m}, Rational(m / 8), cfg.eps);
    const IndexBracket b = limit_operator(runs[r], h.limit, default_alpha_grid(cfg.grid_depth));
    rows.push_back({"limit_operator", labels[r] + " at its Helly limit", to_string(b.lower),
                    to_string(b.upper)});
    if (b.upper > h.escape_bound) {
      d.section.failures.push_back("limit operator of " + labels[r] + " exceeds its escape mass");
    }
    for (std::size_t i = 0; i < depths.size(); ++i) {
      d.convergence.lower[i] =
          max(d.convergence.lower[i], limit_operator(runs[r], h.limit, default_alpha_grid(depths[i])).lower);
    }
    d.convergence.upper = max(d.convergence.upper, b.upper);
  }
  return d;
}

std::string selector_prefix(const std::vector<std::size_t>& sel) {
  std::string out;
  for (std::size_t i = 0; i < std::min<std::size_t>(sel.size(), 8); ++i) {
    out += (i ? " " : "") + std::to_string(sel[i]);
  }
  if (sel.size() > 8) out += " ...";
  return out;
}

Section prokhorov_section(const FamilySpec& family, const RunConfig& cfg) {
  Section s{"Prokhorov bracket", {{"quantity", "value"}, {}}, {}};
  const IndexBracket b = prokhorov_bracket(family, cfg.eps);
  const bool pass = b.within(cfg.eps);
  auto& rows = s.table.rows;
  rows.push_back({"lower", to_string(b.lower)});
  rows.push_back({"upper", to_string(b.upper)});
  rows.push_back({"eps", to_string(cfg.eps)});
  rows.push_back({"width", to_string(Rational(b.upper - b.lower))});
  rows.push_back({"lower_witness", b.lower_witness});
  if (b.upper_witness) {
    rows.push_back({"helly_limit", describe(b.upper_witness->limit)});
    rows.push_back({"helly_selector", selector_prefix(b.upper_witness->selector)});
  }
  rows.push_back({"tight", b.lower == 0 ? "true" : "false"});
  rows.push_back({"weak_rsc", b.upper <= cfg.eps ? "true" : "false"});
  rows.push_back({"result", pass ? "PASS" : "FAIL"});
  if (!pass) {
    s.failures.push_back("bracket [" + to_string(b.lower) + ", " + to_string(b.upper) +
                         "] is wider than eps " + to_string(cfg.eps));
  }
  return s;
}

std::vector<Cdf> seeded_cdfs(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> loc(-16, 16);
  std::uniform_int_distribution<long> mass(1, 5);
  std::uniform_int_distribution<int> parts(1, 4);
  std::vector<Cdf> out;
  for (std::size_t i = 0; i < count; ++i) {
    const int k = parts(rng);
    std::vector<long> w(static_cast<std::size_t>(k));
    long total = 0;
    for (auto& x : w) total += x = mass(rng);
    std::vector<Jump> jumps;
    std::vector<Segment> segs;
    for (int j = 0; j < k; ++j) {
      const Rational at = rational(loc(rng), 4);
      const Rational m = rational(w[static_cast<std::size_t>(j)], total);
      if (rng() % 3 == 0) {
        segs.push_back({at, Rational(at + rational(1 + loc(rng) % 4 + 4, 4)), m});
      } else {
        jumps.push_back({at, m});
      }
    }
    out.push_back(Cdf::from_parts(std::move(jumps), std::move(segs)));
  }
  return out;
}

Section theorem22_section(const FamilySpec& family, const RunConfig& cfg) {
  Section s{"Index chain", {{"item", "value"}, {}}, {}};
  std::vector<Cdf> extra;
  if (cfg.seed) extra = seeded_cdfs(*cfg.seed, 16);
  const CdfTheorem22 t = cdf_theorem22(family, cfg.eps, extra);
  auto show = [](const approach::Bracket& b) {
    return "[" + b.lower.str() + ", " + b.upper.str() + "]";
  };
  auto& rows = s.table.rows;
  rows.push_back({"chi_rsc", show(t.report.rsc)});
  rows.push_back({"chi_rc", show(t.report.rc)});
  rows.push_back({"chi_L", show(t.report.lindelof)});
  rows.push_back({"lindelof_centers", std::to_string(t.lindelof.centers.size())});
  rows.push_back({"lindelof_alpha", to_string(t.lindelof.alpha)});
  for (const auto& line : t.report.lines) {
    const auto sp = line.find(' ');
    rows.push_back({line.substr(sp + 1), line.substr(0, sp)});
  }
  const bool level_ok = t.lindelof.level <= cfg.eps;
  rows.push_back({"chi_L witness level " + to_string(t.lindelof.level) + " <= eps",
                  level_ok ? "PASS" : "FAIL"});
  if (!level_ok) s.failures.push_back("Lindelof witness level above eps");
  return s;
}

std::string render(const Section& s, Format format) {
  return format == Format::Markdown ? render_markdown(s.table) : render_csv(s.table);
}

std::string convergence_svg(const Convergence& c) {
  PlotSeries lo{"lambda lower", {}};
  PlotSeries up{"lambda upper", {}};
  PlotSeries chi{"escape index", {}};
  for (std::size_t i = 0; i < c.depths.size(); ++i) {
    const double x = static_cast<double>(c.depths[i]);
    lo.points.emplace_back(x, to_double(c.lower[i]));
    up.points.emplace_back(x, to_double(c.upper));
    chi.points.emplace_back(x, to_double(c.chi));
  }
  return render_svg("Limit operator bracket versus grid depth", "grid depth (1/alpha)",
                    {lo, up, chi});
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("input", "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("out", "cannot write '" + path + "'");
}

std::string svg_sibling(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const std::string stem =
      dot != std::string::npos && (slash == std::string::npos || dot > slash) ? path.substr(0, dot)
                                                                              : path;
  return stem + ".svg";
}

std::string base_name(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

void error_record(std::ostream& err, const RunConfig& cfg, const char* kind,
                  const std::string& message, const std::string& field = {}) {
  json rec = {{"status", "error"},
              {"kind", kind},
              {"command", command_name(cfg.command)},
              {"message", message}};
  if (!field.empty()) rec["field"] = field;
  err << rec.dump() << '\n';
}

// Runs the command, returns the failures of every asserted contract.
std::vector<std::string> execute(const RunConfig& cfg, const FamilySpec& family, std::ostream& out) {
  std::string text;
  std::vector<std::string> failures;
  auto take = [&](const Section& s) {
    failures.insert(failures.end(), s.failures.begin(), s.failures.end());
  };

  if (cfg.command == Command::Report) {
    const std::string svg_path = svg_sibling(cfg.output_path);
    if (svg_path == cfg.output_path) throw InputError("out", "report output must not be an .svg file");
    IndicesData ind = indices_section(family, cfg);
    const std::vector<Section> sections{ind.section, prokhorov_section(family, cfg),
                                        theorem22_section(family, cfg),
                                        metrics_section(family, cfg)};
    std::ostringstream md;
    md << "# Compactness report\n\n";
    md << "- input: `" << base_name(cfg.input_path) << "`\n";
    md << "- eps: " << to_string(cfg.eps) << "\n";
    md << "- grid depth: " << cfg.grid_depth << "\n\n";
    for (const auto& s : sections) {
      md << "## " << s.title << "\n\n" << render_markdown(s.table) << "\n";
      take(s);
    }
    md << "## Convergence\n\n![limit operator bracket](" << base_name(svg_path) << ")\n\n";
    md << "## Status\n\n";
    if (failures.empty()) {
      md << "All contracts hold.\n";
    } else {
      for (const auto& f : failures) md << "- FAIL: " << f << "\n";
    }
    write_file(cfg.output_path, md.str());
    write_file(svg_path, convergence_svg(ind.convergence));
    out << "wrote " << cfg.output_path << "\nwrote " << svg_path << "\n";
    return failures;
  }

  if (cfg.format == Format::SvgPlot) {
    IndicesData ind = indices_section(family, cfg);
    take(ind.section);
    text = convergence_svg(ind.convergence);
    if (cfg.command == Command::ProkhorovCheck) take(prokhorov_section(family, cfg));
    if (cfg.command == Command::Theorem22) take(theorem22_section(family, cfg));
  } else {
    Section s;
    switch (cfg.command) {
      case Command::Metrics:
        s = metrics_section(family, cfg);
        break;
      case Command::Indices:
        s = indices_section(family, cfg).section;
        break;
      case Command::ProkhorovCheck:
        s = prokhorov_section(family, cfg);
        break;
      case Command::Theorem22:
        s = theorem22_section(family, cfg);
        break;
      case Command::Report:
        break;
    }
    text = render(s, cfg.format);
    take(s);
  }
  if (cfg.output_path.empty()) {
    out << text;
  } else {
    write_file(cfg.output_path, text);
  }
  return failures;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    const FamilySpec family = parse_family_spec(read_file(config.input_path));
    const auto failures = execute(config, family, out);
    if (failures.empty()) return 0;
    std::string msg;
    for (const auto& f : failures) msg += (msg.empty() ? "" : "; ") + f;
    error_record(err, config, "contract", msg);
    return 1;
  } catch (const InputError& e) {
    error_record(err, config, "input", e.what(), e.field());
    return 2;
  } catch (const approach::ContractViolation& e) {
    error_record(err, config, "contract", e.what());
    return 1;
  } catch (const SelectionError& e) {
    error_record(err, config, "selection", e.what(), "x=" + to_string(e.grid_point()));
    return 1;
  } catch (const std::invalid_argument& e) {
    error_record(err, config, "input", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    error_record(err, config, "input", e.what());
    return 2;
  } catch (const std::exception& e) {
    error_record(err, config, "internal", e.what());
    return 1;
  }
}

}  // namespace qprok::cli
