#include <iostream>
#include <string>
#include <vector>

#include "localcodes/cli.hpp"

int main(int argc, char** argv) {
    return localcodes::cli::dispatch(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
