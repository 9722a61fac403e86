#include "doctest.h"

#include <cstdlib>
#include <limits>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "boltzgain/csv_io.hpp"

using namespace boltzgain;

TEST_CASE("format_g17 round-trips doubles") {
    for (double v : {0.1, 1.0 / 3.0, 2.718281828459045, 1e-300, 123456789.123456789, -0.0}) {
        std::string s = format_g17(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_g17(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("CsvWriter emits a stable body") {
    auto path = std::filesystem::temp_directory_path() / "boltzgain_csv_test.csv";
    {
        CsvWriter w(path.string(), {"t", "value"});
        w.row({0.0, 1.0});
        w.row({0.5, 2.0 / 3.0});
    }
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "t,value\n0,1\n0.5,0.66666666666666663\n");
    std::filesystem::remove(path);
    CHECK_THROWS_AS(CsvWriter("/nonexistent-dir-xyz/file.csv", {"a"}), std::runtime_error);
}
