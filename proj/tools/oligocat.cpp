#include "oligocat/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return oligocat::cli::runCommand(args, std::cout, std::cerr);
}
