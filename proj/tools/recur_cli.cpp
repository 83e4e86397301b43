#include <algorithm>
#include <fstream>
#include <iostream>
#include <thread>

#include "commands.hpp"
#include "recur/error.hpp"

namespace {

int report_error(cli::Context& ctx, const std::string& kind,
                 const std::string& message, int code) {
  std::cerr << "error (" << kind << "): " << message << '\n';
  try {
    cli::fs::create_directories(ctx.out);
    std::ofstream f(ctx.out / "error.json");
    f << cli::json{{"kind", kind}, {"message", message}, {"exit_code", code}}
             .dump(2)
      << '\n';
  } catch (...) {
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  cli::Context ctx;
  ctx.threads = std::max(1u, std::thread::hardware_concurrency());
  CLI::App app{"recurrence-rate toolkit for expanding Markov maps"};
  app.set_config("--config", "", "INI/TOML file with option values");
  app.add_option("--seed", ctx.seed, "master RNG seed");
  app.add_option("--out", ctx.out, "output directory");
  app.add_option("--threads", ctx.threads, "worker threads")
      ->check(CLI::Range(1, 1024));
  app.add_flag("--dry-run", ctx.dry_run,
               "validate the configuration and write the manifest only");
  app.require_subcommand(1);

  cli::add_pressure(app, ctx);
  cli::add_dimension(app, ctx);
  cli::add_holes(app, ctx);
  cli::add_construct(app, ctx);
  cli::add_recurrence(app, ctx);
  cli::add_spectrum(app, ctx);
  cli::add_verify(app, ctx);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return report_error(ctx, "ConfigError", e.what(), 2);
  } catch (const recur::Error& e) {
    return report_error(ctx, std::string(recur::to_string(e.kind())), e.what(),
                        recur::exit_code(e.kind()));
  } catch (const cli::fs::filesystem_error& e) {
    return report_error(ctx, "ConfigError", e.what(), 2);
  } catch (const std::exception& e) {
    return report_error(ctx, "Internal", e.what(), 3);
  }
  return 0;
}
