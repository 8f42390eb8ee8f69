#include <string>
#include <vector>

#include "bpsrh/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return bpsrh::cli::run_cli(std::move(args));
}
