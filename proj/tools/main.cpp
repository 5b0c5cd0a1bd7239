#include "cli.hpp"

int main(int argc, char** argv) {
  return qgs::cli::run({argv + 1, argv + argc});
}
