// Exercises the installed CLI surface: subcommands, config file handling and
// exit codes (0 success, 2 config error, 3 runtime error).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

namespace {

int exit_code_of(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    std::cerr << "[FAIL] " << what << "\n";
    ++failures;
  }
}

}  // namespace

int main() {
  const std::string bin = JFCS_CLI_PATH;
  if (std::system("mkdir -p /tmp/jfcs_cli") != 0) return 1;

  expect(exit_code_of(bin + " simulate --preset desk --frames 5 --out /tmp/jfcs_cli") == 0,
         "small simulate exits 0");
  expect(exit_code_of(bin + " benchmark --scheme num-nru --preset desk --frames 5 --out "
                            "/tmp/jfcs_cli") == 0,
         "benchmark exits 0");
  expect(exit_code_of(bin + " sweep --param phi --values 5,15 --preset desk --frames 5 --out "
                            "/tmp/jfcs_cli") == 0,
         "sweep exits 0");
  expect(exit_code_of(bin + " sweep --param lambda --values '' --preset desk --frames 2") == 0,
         "empty sweep exits 0");
  expect(exit_code_of(bin + " verify --values 5,15,25 --preset desk --frames 30 --out "
                            "/tmp/jfcs_cli") == 0,
         "verify exits 0");
  expect(exit_code_of("test -f /tmp/jfcs_cli/desk_phi_sweep.csv") == 0,
         "verify wrote the per-value report");

  expect(exit_code_of(bin + " simulate --phi -3 --preset desk") == 2, "bad phi exits 2");
  expect(exit_code_of(bin + " simulate --config /nonexistent.cfg") == 2,
         "missing config file exits 2");
  expect(exit_code_of(bin + " benchmark --scheme jfcs --preset desk --frames 2") == 2,
         "jfcs is not a benchmark scheme");
  expect(exit_code_of(bin + " bogus-subcommand") == 2, "unknown subcommand exits 2");

  // ZFBF with more co-scheduled UEs than antennas is a runtime failure
  expect(exit_code_of(bin + " simulate --preset desk --antennas 4 --num_ues 6 --path_set_size 4"
                            " --frames 2") == 3,
         "infeasible ZF geometry exits 3");

  {
    std::ofstream cfg("/tmp/jfcs_cli/conf.txt");
    cfg << "phi = 9\nframes = 4\n";
  }
  expect(exit_code_of(bin + " simulate --preset desk --config /tmp/jfcs_cli/conf.txt --out "
                            "/tmp/jfcs_cli") == 0,
         "config file accepted");

  // environment variable overrides the output directory
  expect(exit_code_of("JFCS_OUT_DIR=/tmp/jfcs_cli/envdir " + bin +
                      " simulate --preset desk --frames 3 --out /tmp/ignored_dir") == 0,
         "env override run exits 0");
  expect(exit_code_of("test -f /tmp/jfcs_cli/envdir/desk_slots.csv") == 0,
         "env override directory used");

  if (failures == 0) std::cout << "cli_tests: all checks passed\n";
  return failures == 0 ? 0 : 1;
}
