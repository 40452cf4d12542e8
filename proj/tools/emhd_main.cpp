#include "emhd/harness.hpp"

int main(int argc, char** argv) { return emhd::harness_main(argc, argv); }
