#include "jbcli/commands.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return jbcli::run_cli(argc, argv, std::cout, std::cerr);
}
