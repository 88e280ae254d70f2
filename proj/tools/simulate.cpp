// simulate <mode> --config <path> [--out <path>] [--seed <int>]

#include <iostream>

#include <CLI11.hpp>

#include "cavfermi/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Polarized Fermi gas in a pumped cavity: steady states, dynamics, sweeps"};
  app.set_version_flag("--version", std::string(cavfermi::kToolVersion));

  std::string mode_name;
  cavfermi::CliRequest request;
  std::string out_path;
  std::uint64_t seed = 0;

  app.add_option("mode", mode_name,
                 "coeffs | steady | sweep-atoms | sweep-pump | dynamics | basins | stability-check")
      ->required();
  app.add_option("--config", request.config_path, "JSON run configuration")->required();
  auto* out_opt = app.add_option("--out", out_path, "CSV destination (default: config output, "
                                                    "else stdout)");
  auto* seed_opt = app.add_option("--seed", seed, "overrides the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cavfermi::exit_config;
  }

  try {
    request.mode = cavfermi::parse_mode(mode_name);
  } catch (const cavfermi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cavfermi::exit_config;
  }
  if (*out_opt) request.out_path = out_path;
  if (*seed_opt) request.seed = seed;
  return cavfermi::run_cli(request, std::cout, std::cerr);
}
