#include <iostream>
#include <string>
#include <vector>

#include "qce/run.hpp"

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    return qce::main_entry(args, std::cout, std::cerr);
}
