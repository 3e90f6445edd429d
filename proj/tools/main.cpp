#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "squidbec/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"flux-qubit / trapped-condensate coupling toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned long long seed = 0;

  struct Entry {
    const char* name;
    const char* help;
  };
  static constexpr Entry kSubs[] = {
      {"squid-analyze", "double-well analysis of the circuit potential"},
      {"field-sample", "loop field A/B on a Cartesian grid"},
      {"coupling", "condensate-loop coupling constants"},
      {"transfer", "state-transfer protocol"},
      {"entangle", "entangling protocol"},
      {"sweep-ramp", "final transfer fidelity vs ramp time"},
      {"tomography", "protocol plus simulated readout tomography"},
      {"full-pipeline", "all stages end to end"},
  };
  for (const auto& e : kSubs) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", config_path, "config file (key = value)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "tomography seed override");
    sub->add_flag("--fast", "force the fast dynamics profile");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return squidbec::kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  squidbec::CliInvocation inv;
  inv.subcommand = sub->get_name();
  if (sub->count("--config")) inv.config_path = config_path;
  if (sub->count("--out")) inv.out_dir = out_dir;
  if (sub->count("--seed")) inv.seed = seed;
  inv.fast = sub->count("--fast") > 0;

  std::string err;
  const int rc = squidbec::run_subcommand(inv, err);
  if (rc != squidbec::kExitOk) std::fprintf(stderr, "%s\n", err.c_str());
  return rc;
}
