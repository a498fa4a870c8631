#include "cli.hpp"

int main(int argc, char** argv) { return dynbt::cli::run(argc, argv); }
