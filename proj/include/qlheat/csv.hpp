#pragma once

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <string>

#include "qlheat/errors.hpp"

namespace qlheat {

/// Shortest decimal text that parses back to the identical binary value.
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// CSV sink: a '#' comment line recording the full parameter set, then a
/// header row, then data rows. Values use round-trip decimal form, so a run
/// with an identical configuration produces byte-identical files.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& params_comment, const std::string& header)
        : out_(path, std::ios::binary) {
        if (!out_) throw Error("cannot open output file: " + path);
        out_ << "# " << params_comment << "\n" << header << "\n";
    }

    void row(std::initializer_list<double> cells) {
        bool first = true;
        for (double v : cells) {
            if (!first) out_ << ',';
            out_ << format_double(v);
            first = false;
        }
        out_ << '\n';
    }

    void row(const std::string& label, std::initializer_list<double> cells) {
        out_ << label;
        for (double v : cells) out_ << ',' << format_double(v);
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

} // namespace qlheat
