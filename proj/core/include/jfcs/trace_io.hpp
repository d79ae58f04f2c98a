#ifndef JFCS_TRACE_IO_HPP
#define JFCS_TRACE_IO_HPP

#include <string>
#include <vector>

#include "jfcs/sim.hpp"

namespace jfcs {

/// Shortest round-trip decimal form of a double (to_chars).
std::string format_double(double v);

struct ExportPaths {
  std::string slots;
  std::string frames;
  std::string summary;
};

/// Writes <dir>/<name>_slots.csv, _frames.csv and _summary.csv. Fixed
/// headers, UTF-8, LF line endings, round-trip-exact numbers. Slot-level
/// rates and queues are converted to bits/s and bits. I/O failures raise
/// std::runtime_error carrying the path.
ExportPaths export_csv(const RunTrace& trace, const std::string& dir, const std::string& name);

struct SlotCsvRow {
  int frame = 0;
  int slot = 0;
  int ue = 0;
  double a_bps = 0.0;
  double r_bps = 0.0;
  double qhat_bits = 0.0;
  double sum_q_bits = 0.0;
  double lyap = 0.0;
  double drift = 0.0;
  double drift_ub = 0.0;
};

struct FrameCsvRow {
  int frame = 0;
  int ue = 0;
  int ru = 0;
  double beta = 0.0;
  double uhat = 0.0;
  double thetahat = 0.0;
};

std::vector<SlotCsvRow> parse_slot_csv(const std::string& path);
std::vector<FrameCsvRow> parse_frame_csv(const std::string& path);
std::vector<std::pair<std::string, std::string>> parse_summary_csv(const std::string& path);

}  // namespace jfcs

#endif
