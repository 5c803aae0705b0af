#include <cstdlib>
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::optional<std::string> cache_env;
    if (const char* c = std::getenv("FIBERCURVE_CACHE")) cache_env = c;
    const auto r = fibercurve::cli::run(args, cache_env);
    std::cout << r.out;
    std::cerr << r.err;
    return r.code;
}
