#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "validation.hpp"

using namespace obdwf::cli;

int main(int argc, char** argv) {
  ValidationOptions opt;
  std::filesystem::path out;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--quick") {
      opt.scale = Scale::kQuick;
    } else if (arg == "--out" && i + 1 < argc) {
      out = argv[++i];
    } else if (arg == "--seed" && i + 1 < argc) {
      opt.seed = std::stoull(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--quick] [--seed N] [--out DIR]\n";
      return 2;
    }
  }
  opt.progress = [](const std::string& line) { std::cerr << line << '\n'; };

  const auto results = run_validation(opt);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << "criterion " << r.criterion << ": " << (r.passed ? "PASS" : "FAIL") << "  "
              << r.detail << "  (" << r.seconds << " s)" << std::endl;
    failed += r.passed ? 0 : 1;
  }
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    std::ofstream csv(out / "acceptance.csv");
    write_validation_csv(csv, results);
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
