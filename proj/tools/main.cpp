#include "acceptance.hpp"
#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  minplus::cli::ExecOptions opts;
  opts.out = &std::cout;
  opts.err = &std::cerr;
  opts.selftest = [](std::ostream& os) { return minplus::acceptance::run_all(os); };
  return minplus::cli::run(argc, argv, opts);
}
