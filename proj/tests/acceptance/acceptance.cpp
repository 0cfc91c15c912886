#include <cstdio>

#include "acceptance.hpp"

int main() {
  int failed = 0;
  fblab::app::run_acceptance(fblab::RunConfig{}, [&](const fblab::app::CriterionResult& r) {
    std::printf("%s\n", fblab::app::format_result(r).c_str());
    std::fflush(stdout);
    failed += !r.pass;
  });
  return failed == 0 ? 0 : 1;
}
