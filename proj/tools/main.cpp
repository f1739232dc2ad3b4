#include "wqc/harness.hpp"

int main(int argc, char** argv) { return wqc::cli_main(argc, argv); }
