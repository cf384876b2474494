#include <string>
#include <vector>

#include "sdcsim/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sdcsim::cli::run(args);
}
