#include "thurston/cli.hpp"

int main(int argc, char** argv) { return thurston::run_command(argc, argv); }
