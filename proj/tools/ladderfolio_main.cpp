#include <iostream>

#include "ladderfolio/cli.hpp"

int main(int argc, char** argv)
{
    return ladderfolio::cli_main(argc, argv, std::cout, std::cerr);
}
