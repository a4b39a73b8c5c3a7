#include "relcay/cli.hpp"

int main(int argc, char** argv) {
  return relcay::run(argc, argv);
}
