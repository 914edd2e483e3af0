#include <cstdio>

#include "whardy/acceptance.hpp"

int main() {
  bool all = true;
  whardy::run_acceptance_suite("all", 0, [&](const whardy::AcceptanceResult& r) {
    std::printf("criterion %2d %-4s %-28s %7.2fs  %s\n", r.id, r.pass ? "PASS" : "FAIL", r.title.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
    all = all && r.pass;
  });
  return all ? 0 : 1;
}
