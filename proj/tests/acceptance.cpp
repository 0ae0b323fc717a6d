// Acceptance gate: runs every criterion at full scale and prints one
// pass/fail line per criterion. Nonzero exit on any failure.

#include <cstdio>
#include <cstring>

#include "densitylab/suites.hpp"

int main(int argc, char** argv) {
  bool quick = false;
  std::uint64_t seed = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
      seed = std::strtoull(argv[++i], nullptr, 10);
  }

  const auto checks = densitylab::acceptance_criteria(seed, quick);
  int failures = 0;
  double total = 0;
  for (const auto& c : checks) {
    std::printf("[%s] %s (%.2fs)", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.seconds);
    if (!c.detail.empty()) std::printf(" -- %s", c.detail.c_str());
    std::printf("\n");
    std::fflush(stdout);
    if (!c.pass) ++failures;
    total += c.seconds;
  }
  std::printf("%zu criteria, %d failed, %.1fs total\n", checks.size(), failures, total);
  return failures == 0 ? 0 : 1;
}
