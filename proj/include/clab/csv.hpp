#pragma once

#include <gmpxx.h>

#include <sstream>
#include <string>
#include <vector>

#include "clab/real.hpp"

namespace clab {

// Deterministic numeric formatting: same inputs, same bytes.
std::string fmt_double(double x, int digits = 12);
std::string fmt_real(const Real& x, int digits = 12);
std::string fmt_mpq(const mpq_class& q, int digits = 12);  // scientific decimal

class CsvBuilder {
 public:
  void comment(const std::string& text) { os_ << "# " << text << "\n"; }
  void header(const std::vector<std::string>& cols) { line(cols); }
  void row(const std::vector<std::string>& cells) { line(cells); }
  std::string str() const { return os_.str(); }

 private:
  void line(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ",";
      os_ << cells[i];
    }
    os_ << "\n";
  }
  std::ostringstream os_;
};

// drop the isolated "# timestamp = ..." line for byte comparisons
std::string strip_timestamp(const std::string& csv);

}  // namespace clab
