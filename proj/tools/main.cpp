#include "qngc/cli.hpp"

int main(int argc, char** argv) { return qngc::run_cli(argc, argv); }
