#include "rumour/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return rumour::run_cli(argc, argv, std::cout, std::cerr);
}
