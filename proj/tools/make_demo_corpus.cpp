#include <cstdint>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "demo_corpus.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate a synthetic sentence-per-line corpus for demos and tests"};
    std::string output = "demo_corpus.txt";
    std::size_t sentences = 60000;
    std::uint64_t seed = 1;
    app.add_option("--output", output, "output path");
    app.add_option("--sentences", sentences, "number of sentences");
    app.add_option("--seed", seed, "generator seed");
    CLI11_PARSE(app, argc, argv);

    std::ofstream out(output, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << output << "\n";
        return 1;
    }
    svdstack::demo::write_demo_corpus(out, sentences, seed);
    return 0;
}
