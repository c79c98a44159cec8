#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qprok/cli.hpp"

int main(int argc, char** argv) {
  using namespace qprok;
  CLI::App app{"Compactness indices and distances for families of distribution functions"};
  app.require_subcommand(1);

  std::string eps = "1/100";
  std::size_t depth = 64;
  std::vector<std::string> gammas;
  std::vector<std::string> alphas;
  std::string window;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out_path;
  std::string input;

  const std::vector<std::pair<const char*, const char*>> commands{
      {"metrics", "pairwise D_u, Levy and phi tables"},
      {"indices", "escape index, tightness and limit operator brackets"},
      {"prokhorov-check", "sequential compactness bracket with pass/fail at eps"},
      {"theorem22", "compactness index chain"},
      {"report", "Markdown report plus SVG convergence plot (needs --out)"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("input", input, "family JSON document")->required();
    sub->add_option("--eps", eps, "tolerance as p/q")->capture_default_str();
    sub->add_option("--grid-depth", depth, "alpha grid 1, 1/2, ..., 1/depth")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--gamma", gammas, "Levy parameter (repeatable, default 1)");
    sub->add_option("--alpha", alphas, "phi parameter (repeatable, default 1/10)");
    sub->add_option("--window", window, "also report the escape profile at M");
    sub->add_option("--seed", seed, "seed for extra random test members");
    sub->add_option("--format", format, "csv, markdown or svg-plot")->capture_default_str();
    sub->add_option("--out", out_path, "output file (default stdout)");
  }

  CLI11_PARSE(app, argc, argv);

  cli::RunConfig cfg;
  cfg.input_path = input;
  cfg.grid_depth = depth;
  cfg.output_path = out_path;
  try {
    const CLI::App* chosen = app.get_subcommands().front();
    cfg.command = cli::parse_command(chosen->get_name());
    cfg.eps = parse_rational(eps);
    cfg.format = cli::parse_format(format);
    for (const auto& g : gammas) cfg.gammas.push_back(parse_rational(g));
    for (const auto& a : alphas) cfg.alphas.push_back(parse_rational(a));
    if (!window.empty()) cfg.window = parse_rational(window);
    if (chosen->count("--seed") > 0) cfg.seed = seed;
  } catch (const std::exception& e) {
    std::cerr << "{\"status\":\"error\",\"kind\":\"input\",\"message\":"
              << nlohmann::json(e.what()).dump() << "}\n";
    return 2;
  }
  return cli::run(cfg, std::cout, std::cerr);
}
