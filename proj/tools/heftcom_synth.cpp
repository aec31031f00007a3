#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "heftcom/config.hpp"
#include "heftcom/error.hpp"
#include "heftcom/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Write a seeded synthetic competition in the canonical input format"};
    std::string out_dir;
    std::string window = "2024-02-20:2024-03-10";
    std::string days = "london";
    std::uint64_t seed = 7;
    app.add_option("out-dir", out_dir, "destination directory")->required();
    app.add_option("--window", window, "market days to generate submissions for");
    app.add_option("--days", days, "market-day convention: london or utc");
    app.add_option("--seed", seed, "random seed");
    CLI11_PARSE(app, argc, argv);

    try {
        heftcom::SyntheticOptions options;
        std::tie(options.start, options.end) = heftcom::parse_window(window);
        options.days = heftcom::parse_day_convention(days);
        options.seed = seed;
        heftcom::write_synthetic(heftcom::generate_synthetic(options), out_dir);
    } catch (const heftcom::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
