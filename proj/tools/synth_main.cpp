// Emits a synthetic labeled code-mixed corpus in the shared-task JSON
// format, for smoke tests and desk-scale experiments.

#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "cmsa/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"synthetic code-mixed corpus generator"};
  std::size_t n = 1000;
  std::uint64_t seed = 42;
  std::string out;
  app.add_option("--n", n, "number of samples")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed");
  app.add_option("--out", out, "output file (stdout when omitted)");
  CLI11_PARSE(app, argc, argv);

  const std::string json = cmsa::make_synthetic_corpus_json(n, seed);
  if (out.empty()) {
    std::fputs(json.c_str(), stdout);
    std::fputc('\n', stdout);
  } else {
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::fprintf(stderr, "cannot open %s for writing\n", out.c_str());
      return 1;
    }
    file << json;
  }
  return 0;
}
