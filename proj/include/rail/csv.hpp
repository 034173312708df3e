#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rail/simulation.hpp"

namespace rail {

inline constexpr const char* kRecordHeader = "step,time,rank,mass,rel_mass_dev,l1_error,decay_l1";
inline constexpr const char* kConvergenceHeader = "lambda,dt,steps,l1_error,order";

/// Reals use 17 significant digits; unset optionals are empty fields.
void write_records(std::ostream& out, const std::vector<StepRecord>& records);
void write_convergence(std::ostream& out, const ConvergenceTable& table);

/// Throws IoError naming the path when the file cannot be written.
void emit_csv(const std::vector<StepRecord>& records, const std::string& path);
void emit_convergence_csv(const ConvergenceTable& table, const std::string& path);

/// Parses a file written by write_records. Throws IoError on malformed input.
std::vector<StepRecord> read_records(std::istream& in);

}  // namespace rail
