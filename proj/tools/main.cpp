#include <sepbayes/cli.hpp>

int main(int argc, char** argv) { return sepbayes::cli::run(argc, argv); }
