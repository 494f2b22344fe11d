// Experiment runner. Subcommands are registered as the corresponding modules
// come online; see README for usage.

#include <CLI11.hpp>

#include "multitime/spacetime.hpp"

int main(int argc, char** argv) {
  CLI::App app{"multi-time wave-function laboratory"};
  app.require_subcommand(0, 1);
  CLI11_PARSE(app, argc, argv);
  return 0;
}
