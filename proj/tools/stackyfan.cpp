#include "stackyfan/cli.hpp"

int main(int argc, char** argv) { return stackyfan::cli::run(argc, argv); }
