#include "casimir/cli.hpp"

int main(int argc, char** argv) {
    return casimir::cli::run(argc, argv);
}
