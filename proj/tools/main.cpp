#include <CLI11.hpp>
#include <iostream>
int main(int argc, char** argv) {
    CLI::App app{"orbitree"};
    CLI11_PARSE(app, argc, argv);
    std::cout << "orbitree\n";
    return 0;
}
