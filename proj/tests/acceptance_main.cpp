#include <iostream>
#include "sdlab/acceptance.hpp"
int main() {
  const auto results = sdlab::acceptance::run_all(std::cout);
  return sdlab::acceptance::all_passed(results) ? 0 : 1;
}
