// SPDX-License-Identifier: Apache-2.0
//
// satk <command> (--input FILE | --seed U64) [--config JSON] [--out PATH] [--csv]
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "satk/harness.hpp"

namespace {

void write_file(const std::string& path, const std::string& text)
{
  std::ofstream f(path, std::ios::binary);
  if (!f) throw satk::InvalidInput("cannot write '" + path + "'");
  f << text;
}

std::string csv_path(const std::string& out)
{
  const std::string ext = ".json";
  if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0)
    return out.substr(0, out.size() - ext.size()) + ".csv";
  return out + ".csv";
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Spectral asymptotics toolkit"};
  std::string command, input, config, out;
  std::uint64_t seed = 0;
  bool csv = false;
  unsigned threads = 1;
  app.add_option("command", command, "decompose | limit | iterate | yamamoto | vector-exponent | shift | semigroup | sweep")
      ->required();
  auto* inputOpt = app.add_option("--input", input, "matrix file (Matrix Market or JSON)");
  auto* seedOpt = app.add_option("--seed", seed, "seed for a generated instance");
  inputOpt->excludes(seedOpt);
  app.add_option("--config", config, "JSON parameters: a file path or an inline object");
  app.add_option("--out", out, "write the run record here instead of stdout");
  app.add_flag("--csv", csv, "also write the per-n error table (n,error,log_error)");
  app.add_option("--threads", threads, "worker threads for sweep and iterate")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    satk::RunConfig cfg;
    cfg.command = command;
    cfg.input = input;
    cfg.seeded = seedOpt->count() > 0;
    cfg.seed = seed;
    cfg.threads = threads;
    if (!config.empty()) {
      const auto first = config.find_first_not_of(" \t\r\n");
      std::string text = config;
      try {
        if (first == std::string::npos || config[first] != '{') text = satk::read_text_file(config);
        cfg.params = satk::json::parse(text);
      } catch (const satk::InvalidInput& e) {
        throw satk::UsageError(std::string("--config: ") + e.what());
      } catch (const satk::json::parse_error& e) {
        throw satk::UsageError(std::string("--config: ") + e.what());
      }
      if (!cfg.params.is_object()) throw satk::UsageError("--config must be a JSON object");
    }

    const satk::RunRecord rec = satk::run_command(cfg);
    if (out.empty()) {
      std::cout << rec.dump();
      if (csv) std::cout << rec.csv();
    } else {
      write_file(out, rec.dump());
      if (csv) write_file(csv_path(out), rec.csv());
    }
    if (rec.status == "error") std::cerr << "satk: " << rec.error.at("kind").get<std::string>() << ": "
                                         << rec.error.at("message").get<std::string>() << "\n";
    return rec.passed() ? 0 : 1;
  } catch (const satk::UsageError& e) {
    std::cerr << "satk: " << e.what() << "\n";
    return 2;
  } catch (const satk::Error& e) {
    std::cerr << "satk: " << e.kind() << ": " << e.what() << "\n";
    return 1;
  }
}
