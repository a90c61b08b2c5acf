// Acceptance runner: one line per criterion, exit 1 if any fails.
//
//   discflux_acceptance [--filter group,...] [--tighten k] [--seed s] [--out dir]

#include <iostream>

#include <CLI11.hpp>

#include "discflux/acceptance.hpp"
#include "discflux/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  discflux::AcceptanceOptions opt;
  opt.work_dir = "acceptance_out";
  app.add_option("--filter", opt.filter, "Comma-separated groups");
  app.add_option("--tighten", opt.tighten, "Divide tolerances by this factor");
  app.add_option("--seed", opt.seed, "Property-test seed");
  app.add_option("--out", opt.work_dir, "Scratch directory");
  CLI11_PARSE(app, argc, argv);
  try {
    const auto results = discflux::run_acceptance(opt, &std::cout);
    bool ok = !results.empty();
    for (const auto& r : results) ok = ok && r.pass;
    return ok ? 0 : 1;
  } catch (const discflux::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
}
