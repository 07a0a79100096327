#include "cofix/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cofix/errors.hpp"

namespace cofix {
namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string trace_to_csv(const std::vector<TraceStep>& steps) {
  std::ostringstream out;
  out << "n,d2_step,bound,monotone_ok\n";
  for (const TraceStep& s : steps)
    out << s.n << "," << format_double(s.d2_step) << "," << format_double(s.bound) << ","
        << (s.monotone_ok ? "true" : "false") << "\n";
  return out.str();
}

nlohmann::json trace_to_json(const std::vector<TraceStep>& steps) {
  nlohmann::json rows = nlohmann::json::array();
  for (const TraceStep& s : steps)
    rows.push_back({{"n", s.n},
                    {"d2_step", s.d2_step},
                    {"bound", s.bound},
                    {"monotone_ok", s.monotone_ok}});
  return rows;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DiagnosticError("cannot open for writing: " + path);
  out << body;
  out.flush();
  if (!out) throw DiagnosticError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DiagnosticError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw DiagnosticError("read failed: " + path);
  return buf.str();
}

}  // namespace cofix
