#pragma once
#include <fstream>
#include <string>
#include <vector>

namespace boltzgain {

// full-precision rendering: round-trips every finite double
std::string format_g17(double v);

// Minimal CSV emitter: header row, comma separated, %.17g numbers, "." decimal
// separator regardless of locale. Bodies are reproducible byte for byte for
// identical inputs.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void close();

private:
    std::ofstream out_;
    std::size_t width_ = 0;
};

} // namespace boltzgain
