#include "jfcs/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace jfcs {

std::string format_double(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return {buf, p};
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

void check_write(const std::ofstream& out, const std::string& path) {
  if (!out) throw std::runtime_error("write failed: " + path);
}

double parse_num(const std::string& field, const std::string& path) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || p != field.data() + field.size())
    throw std::runtime_error(path + ": bad numeric field '" + field + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               const std::string& expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header)
    throw std::runtime_error(path + ": unexpected header '" + line + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

constexpr const char* kSlotHeader = "frame,slot,ue,a_bps,r_bps,qhat_bits,sum_q_bits,L,dL,dL_ub";
constexpr const char* kFrameHeader = "frame,ue,ru,beta,uhat,thetahat";
constexpr const char* kSummaryHeader = "key,value";

}  // namespace

ExportPaths export_csv(const RunTrace& trace, const std::string& dir, const std::string& name) {
  const std::string base = dir.empty() ? name : dir + "/" + name;
  ExportPaths paths{base + "_slots.csv", base + "_frames.csv", base + "_summary.csv"};
  const double unit = trace.cfg.rate_unit_bps;

  {
    auto out = open_out(paths.slots);
    out << kSlotHeader << "\n";
    for (const auto& s : trace.slots) {
      for (std::size_t ue = 0; ue < s.admitted.size(); ++ue) {
        out << s.frame << ',' << s.slot << ',' << ue << ',' << format_double(s.admitted[ue] * unit)
            << ',' << format_double(s.rate[ue] * unit) << ','
            << format_double(s.qhat[ue] * unit) << ',' << format_double(s.sum_q[ue] * unit)
            << ',' << format_double(s.lyap) << ',' << format_double(s.drift) << ','
            << format_double(s.drift_ub) << '\n';
      }
    }
    check_write(out, paths.slots);
  }
  {
    auto out = open_out(paths.frames);
    out << kFrameHeader << "\n";
    for (const auto& f : trace.frames) {
      out << f.frame << ',' << f.ue << ',' << f.ru << ',' << format_double(f.beta) << ','
          << format_double(f.uhat) << ',' << format_double(f.thetahat) << '\n';
    }
    check_write(out, paths.frames);
  }
  {
    auto out = open_out(paths.summary);
    out << kSummaryHeader << "\n";
    const RunSummary& s = trace.summary;
    const auto kv = [&](const std::string& k, const std::string& v) {
      out << k << ',' << v << '\n';
    };
    kv("scheme", to_string(trace.cfg.scheme));
    kv("scheduler", to_string(trace.cfg.scheduler));
    kv("seed", std::to_string(trace.cfg.seed));
    kv("frames", std::to_string(trace.cfg.frames));
    kv("slots_per_frame", std::to_string(trace.cfg.slots_per_frame));
    kv("phi", format_double(trace.cfg.phi));
    kv("lambda", format_double(trace.cfg.lambda));
    kv("antennas", std::to_string(trace.cfg.topo.antennas_per_ru));
    kv("steady_a_norm_bps", format_double(s.steady_a_norm * unit));
    kv("steady_qhat_l1_bits", format_double(s.steady_qhat_l1 * unit));
    kv("worst_delay_s", format_double(s.worst_delay_s));
    kv("slots_to_steady", std::to_string(s.slots_to_steady));
    kv("drift_violations", std::to_string(s.drift_violations));
    kv("min_rate_drops", std::to_string(s.min_rate_drops));
    kv("degenerate_drops", std::to_string(s.degenerate_drops));
    kv("b_max", format_double(s.b_max));
    kv("r_max_capacity_bps", format_double(s.r_max_capacity * unit));
    kv("psi", format_double(s.psi));
    kv("big_psi", format_double(s.big_psi));
    kv("c1", format_double(s.c1));
    kv("c2", format_double(s.c2));
    kv("c3", format_double(s.c3));
    kv("queue_growth_bound_bits", format_double(s.queue_growth_bound * unit));
    kv("queue_bound_holds", s.queue_bound_holds ? "1" : "0");
    kv("unstable", s.unstable ? "1" : "0");
    for (std::size_t ue = 0; ue < s.steady_a_ue.size(); ++ue)
      kv("steady_a_ue_" + std::to_string(ue) + "_bps", format_double(s.steady_a_ue[ue] * unit));
    check_write(out, paths.summary);
  }
  return paths;
}

std::vector<SlotCsvRow> parse_slot_csv(const std::string& path) {
  std::vector<SlotCsvRow> rows;
  for (const auto& f : read_csv(path, kSlotHeader)) {
    if (f.size() != 10) throw std::runtime_error(path + ": bad column count");
    SlotCsvRow r;
    r.frame = static_cast<int>(parse_num(f[0], path));
    r.slot = static_cast<int>(parse_num(f[1], path));
    r.ue = static_cast<int>(parse_num(f[2], path));
    r.a_bps = parse_num(f[3], path);
    r.r_bps = parse_num(f[4], path);
    r.qhat_bits = parse_num(f[5], path);
    r.sum_q_bits = parse_num(f[6], path);
    r.lyap = parse_num(f[7], path);
    r.drift = parse_num(f[8], path);
    r.drift_ub = parse_num(f[9], path);
    rows.push_back(r);
  }
  return rows;
}

std::vector<FrameCsvRow> parse_frame_csv(const std::string& path) {
  std::vector<FrameCsvRow> rows;
  for (const auto& f : read_csv(path, kFrameHeader)) {
    if (f.size() != 6) throw std::runtime_error(path + ": bad column count");
    FrameCsvRow r;
    r.frame = static_cast<int>(parse_num(f[0], path));
    r.ue = static_cast<int>(parse_num(f[1], path));
    r.ru = static_cast<int>(parse_num(f[2], path));
    r.beta = parse_num(f[3], path);
    r.uhat = parse_num(f[4], path);
    r.thetahat = parse_num(f[5], path);
    rows.push_back(r);
  }
  return rows;
}

std::vector<std::pair<std::string, std::string>> parse_summary_csv(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& f : read_csv(path, kSummaryHeader)) {
    if (f.size() != 2) throw std::runtime_error(path + ": bad column count");
    rows.emplace_back(f[0], f[1]);
  }
  return rows;
}

}  // namespace jfcs
