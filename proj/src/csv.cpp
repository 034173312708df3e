#include "rail/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rail/errors.hpp"

namespace rail {

namespace {

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string optional_real(const std::optional<double>& v) { return v ? real(*v) : std::string(); }

template <class Writer>
void write_file(const std::string& path, Writer&& write) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

double parse_field(const std::string& field, std::size_t line) {
  double v = 0.0;
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw IoError("line " + std::to_string(line) + ": bad numeric field '" + field + "'");
  }
  return v;
}

}  // namespace

void write_records(std::ostream& out, const std::vector<StepRecord>& records) {
  out << kRecordHeader << '\n';
  for (const StepRecord& r : records) {
    out << r.step << ',' << real(r.time) << ',' << r.rank << ',' << real(r.mass) << ','
        << real(r.rel_mass_dev) << ',' << optional_real(r.l1_error) << ','
        << optional_real(r.decay_l1) << '\n';
  }
}

void write_convergence(std::ostream& out, const ConvergenceTable& table) {
  out << kConvergenceHeader << '\n';
  for (const ConvergenceRow& r : table.rows) {
    out << real(r.lambda) << ',' << real(r.dt) << ',' << r.steps << ',' << real(r.l1_error) << ','
        << optional_real(r.order) << '\n';
  }
}

void emit_csv(const std::vector<StepRecord>& records, const std::string& path) {
  write_file(path, [&](std::ostream& out) { write_records(out, records); });
}

void emit_convergence_csv(const ConvergenceTable& table, const std::string& path) {
  write_file(path, [&](std::ostream& out) { write_convergence(out, table); });
}

std::vector<StepRecord> read_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader) throw IoError("missing record header");
  std::vector<StepRecord> out;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 7) throw IoError("line " + std::to_string(lineno) + ": expected 7 fields");
    StepRecord r;
    r.step = static_cast<std::size_t>(parse_field(f[0], lineno));
    r.time = parse_field(f[1], lineno);
    r.rank = static_cast<std::size_t>(parse_field(f[2], lineno));
    r.mass = parse_field(f[3], lineno);
    r.rel_mass_dev = parse_field(f[4], lineno);
    if (!f[5].empty()) r.l1_error = parse_field(f[5], lineno);
    if (!f[6].empty()) r.decay_l1 = parse_field(f[6], lineno);
    out.push_back(r);
  }
  return out;
}

}  // namespace rail
