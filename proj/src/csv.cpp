#include "clab/csv.hpp"

#include <cstdio>

namespace clab {

std::string fmt_double(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string fmt_real(const Real& x, int digits) { return x.str(digits); }

std::string fmt_mpq(const mpq_class& q, int digits) {
  Real r(q, 192);
  return r.str(digits);
}

std::string strip_timestamp(const std::string& csv) {
  std::string out;
  out.reserve(csv.size());
  size_t pos = 0;
  while (pos < csv.size()) {
    size_t nl = csv.find('\n', pos);
    if (nl == std::string::npos) nl = csv.size();
    std::string line = csv.substr(pos, nl - pos);
    if (line.rfind("# timestamp", 0) != 0) {
      out += line;
      out += "\n";
    }
    pos = nl + 1;
  }
  return out;
}

}  // namespace clab
