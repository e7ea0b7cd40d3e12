// Writes a synthetic recognition suite (blocks-world and logistics bundles).

#include <CLI11.hpp>

#include <iostream>

#include "lmrecog/generate.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a recognition benchmark suite"};
  std::string out;
  lmrecog::fixtures::SuiteSpec spec;
  app.add_option("--out", out, "Suite root directory")->required();
  app.add_option("--blocks", spec.blocks_problems, "Number of blocks-world problems");
  app.add_option("--logistics", spec.logistics_problems, "Number of logistics problems");
  app.add_option("--max-blocks", spec.max_blocks, "Largest number of blocks")->check(CLI::Range(4, 8));
  app.add_option("--max-packages", spec.max_packages, "Largest number of packages")->check(CLI::Range(1, 4));
  app.add_option("--hypotheses", spec.hypotheses, "Goal hypotheses per problem")->check(CLI::Range(2, 20));
  app.add_option("--levels", spec.levels, "Observability levels")->check(CLI::IsMember({10, 30, 50, 70, 100}));
  app.add_option("--seed", spec.seed, "Random seed");
  CLI11_PARSE(app, argc, argv);
  try {
    auto bundles = lmrecog::fixtures::write_suite(out, spec);
    std::cout << bundles.size() << " bundles written to " << out << '\n';
  } catch (const std::exception& e) {
    std::cerr << "lmrecog-gen: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
