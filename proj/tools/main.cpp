#include "bihcert/cli.hpp"

int main(int argc, char** argv) { return bihcert::cli::run(argc, argv); }
