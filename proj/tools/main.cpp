#include "promptcast/cli.hpp"

int main(int argc, char** argv) { return promptcast::cli::run(argc, argv); }
