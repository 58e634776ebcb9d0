// tpi-sim: three-photon interference simulator front end.
//
//   tpi-sim sweep    --config run.cfg [--out dir] [--threads n]
//   tpi-sim validate --config run.cfg [--out dir] [--threads n]
//   tpi-sim reduce   --config run.cfg [--out dir]

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tpi/errors.hpp"
#include "tpi/runner.hpp"

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += (ch == '\n') ? ' ' : ch;
  }
  return out + "\"";
}

int report(const char* kind, const std::string& msg, std::size_t line = 0,
           const std::string& key = {}) {
  std::cerr << "error kind=" << kind << " line=" << line << " key=" << (key.empty() ? "-" : key)
            << " msg=" << quoted(msg) << std::endl;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-photon interference simulator"};
  app.set_version_flag("--version", tpi::kVersion);
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::size_t threads = 1;
  long long seed = 0;
  std::string command;
  for (const char* name : {"sweep", "validate", "reduce"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "reserved; the simulator draws no random numbers");
    sub->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report("UsageError", e.what());
    return 2;
  }

  try {
    const tpi::RunConfig cfg = tpi::load_config(config);
    tpi::RunOptions opts{out_dir, threads};
    if (command == "sweep") {
      tpi::run_sweep_command(cfg, opts);
    } else if (command == "validate") {
      tpi::run_validate_command(cfg, opts);
    } else {
      tpi::run_reduce_command(cfg, opts, std::cout);
    }
  } catch (const tpi::ParseError& e) {
    return report(e.kind(), e.what(), e.line(), e.key());
  } catch (const tpi::ValidationError& e) {
    return report(e.kind(), e.what(), 0, e.key());
  } catch (const tpi::Error& e) {
    return report(e.kind(), e.what());
  } catch (const std::invalid_argument& e) {
    return report("ValidationError", e.what());
  } catch (const std::exception& e) {
    return report("Error", e.what());
  }
  return 0;
}
