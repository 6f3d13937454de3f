#include "qdilog/cli.hpp"

int main(int argc, char** argv) { return qdilog::run(argc, argv); }
