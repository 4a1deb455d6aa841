#include <iostream>

#include "robosync/cli.hpp"

int main(int argc, char** argv)
{
    return robosync::cli::main(argc, argv, std::cout, std::cerr);
}
