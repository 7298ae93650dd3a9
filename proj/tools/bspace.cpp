#include <bspace/cli.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    return bspace::cli::run(argc, argv, std::cout, std::cerr);
}
