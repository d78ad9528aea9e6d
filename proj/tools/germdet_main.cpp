#include <iostream>

#include "germdet/report.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    std::cout << "usage: germdet {analyze|orbit|oracle} [--field QQ|Fp:p] [--vars x,y]\n"
                 "         (--poly F | --map F1,F2 | --matrix \"a,b;c,d\") [--group right|contact|matrix]\n"
                 "         [--filtration m-adic|weighted:w1,..|chain:I1=..;A=..] [--degree D] [--cap N]\n"
                 "         [--perturb W] [--mode lie|weak-lie] [--relative G,..] [--quotient G,..]\n"
                 "         [--json] [--no-timing]\n"
                 "       germdet batch CORPUS [--json] [--jobs N]\n";
    return args.empty() ? 2 : 0;
  }
  if (args[0] == "--version") {
    std::cout << "germdet " << germdet::engine_version() << "\n";
    return 0;
  }
  germdet::CliResult r = germdet::run_cli(args);
  std::cout << r.output;
  return r.exit_code;
}
