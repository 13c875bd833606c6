#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "magmech/errors.hpp"

namespace magmech {

// RFC-4180-style CSV writer with a frozen, versioned schema header. Doubles
// are printed with max_digits10 so identical runs produce byte-identical
// files.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& kind,
            const std::vector<std::string>& columns, const std::string& params_line = "") {
    out_.open(path, std::ios::binary);
    if (!out_) throw validation_error("cannot open output file '" + path + "'");
    out_ << "# magmech-csv v1 " << kind << "\n";
    if (!params_line.empty()) out_ << "# params " << params_line << "\n";
    write_row_strings(columns);
  }

  static std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }

  static std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string q = "\"";
    for (char c : field) {
      if (c == '"') q += '"';
      q += c;
    }
    q += '"';
    return q;
  }

  void write_row_strings(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << quote(fields[i]);
    }
    out_ << '\n';
  }

  void write_row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << format(values[i]);
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

}  // namespace magmech
