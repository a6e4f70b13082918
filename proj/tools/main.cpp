#include "mmsbkit/cli.hpp"

int main(int argc, char** argv) { return mmsb::run_cli(argc, argv); }
