#include "slsh/cli.hpp"

int main(int argc, char** argv) {
    return slsh::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
