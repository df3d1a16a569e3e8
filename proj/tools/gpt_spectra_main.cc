#include <iostream>
#include <string>
#include <vector>

#include "gpt_spectra/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gpt_spectra::RunCli(args, std::cout, std::cerr);
}
