#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pqe {

// Shortest-ish decimal rendering with up to `significant` digits ("%.Ng").
// Used for every floating-point value written to an output file so that
// repeated runs are byte-identical.
std::string fmt_g(double v, int significant = 12);

std::string to_lower_ascii(std::string s);
std::string trim(const std::string& s);
std::vector<std::string> split_ws(const std::string& s);
std::vector<std::string> split_char(const std::string& s, char sep);

bool parse_i64(const std::string& s, long long* out);
bool parse_f64(const std::string& s, double* out);

// "# pqe 1.0.0 <kind> key=value ..." comment line carried at the top of
// output files. Deliberately contains no timestamps or absolute paths.
std::string file_header(
    const std::string& kind,
    const std::vector<std::pair<std::string, std::string>>& params);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace pqe
