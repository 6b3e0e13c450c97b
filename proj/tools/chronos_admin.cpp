#include <iostream>

#include "chronos/admin/cli.hpp"

int main(int argc, char** argv) { return chronos::admin::run_admin(argc, argv, std::cin, std::cout, std::cerr); }
