#include "exposure_lab/cli.hpp"

int main(int argc, char** argv) { return exposure_lab::cli::run(argc, argv); }
