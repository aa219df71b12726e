#include <iostream>

#include "metric_coreset/cli.hpp"

int main(int argc, char** argv) {
    return metric_coreset::cli::main_entry(argc, argv, std::cout, std::cerr);
}
