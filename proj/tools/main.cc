#include "cli.h"

int main(int argc, char** argv) {
  return uavmatch::cli::Run(std::vector<std::string>(argv, argv + argc));
}
