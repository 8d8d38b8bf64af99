#include "cocyc/cli.hpp"

int main(int argc, char** argv) { return cocyc::run(argc, argv); }
