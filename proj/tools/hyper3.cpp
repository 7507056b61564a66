#include <iostream>

#include "hyper3/cli.hpp"

int main(int argc, char** argv) {
  return hyper3::parse_and_dispatch({argv + 1, argv + argc}, std::cout, std::cerr);
}
