#include <string>
#include <vector>

#include "felab/cli.hpp"

int main(int argc, char** argv) { return felab::dispatch(std::vector<std::string>(argv, argv + argc)); }
