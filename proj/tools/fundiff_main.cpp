#include <iostream>
#include <string>
#include <vector>

#include "fundiff/cli.hpp"

extern char** environ;

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<std::string> env;
    for (char** e = environ; e && *e; ++e) env.emplace_back(*e);
    return fundiff::cli::run(args, std::cout, std::cerr, env);
}
