#ifndef ROSEN_IO_HPP
#define ROSEN_IO_HPP

#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace rosen {

// Every JSON document carries a schema marker at the top level.
inline std::string json_dump(nlohmann::json j) {
    j["schema"] = 1;
    return j.dump(2) + "\n";
}

class CsvBuilder {
public:
    explicit CsvBuilder(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
        out_.precision(std::numeric_limits<double>::max_digits10);
    }

    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i) out_ << ',';
            out_ << vals[i];
        }
        out_ << '\n';
    }

    void raw_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

// Empty path or "-" writes to stdout.
inline void write_text(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << content;
}

} // namespace rosen

#endif
