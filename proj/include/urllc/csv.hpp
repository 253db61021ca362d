#pragma once

// Minimal CSV emitter with locale-independent formatting: '.' decimal
// separator via snprintf in the C locale, '\n' line endings, fixed column
// order set by the header.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace urllc {

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns) {
        out_.open(path, std::ios::binary);
        if (!out_) {
            throw std::runtime_error("cannot open CSV output file: " + path);
        }
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out_ << ',';
            out_ << columns[i];
        }
        out_ << '\n';
        width_ = columns.size();
    }

    void cell(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        push(buf);
    }
    void cell(int v) { push(std::to_string(v)); }
    void cell(long long v) { push(std::to_string(v)); }
    void cell(const std::string& v) { push(v); }
    void cell(const char* v) { push(v); }

    template <typename... Ts>
    void row(const Ts&... values) {
        (cell(values), ...);
        end_row();
    }

  private:
    void push(const std::string& text) {
        if (filled_) out_ << ',';
        out_ << text;
        filled_ = true;
        ++count_;
    }

    void end_row() {
        if (count_ != width_) {
            throw std::logic_error("CSV row width does not match the header");
        }
        out_ << '\n';
        filled_ = false;
        count_ = 0;
    }

    std::ofstream out_;
    std::size_t width_ = 0;
    std::size_t count_ = 0;
    bool filled_ = false;
};

}  // namespace urllc
