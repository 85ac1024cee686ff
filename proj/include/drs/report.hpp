#ifndef DRS_REPORT_HPP
#define DRS_REPORT_HPP

#include <string>
#include <vector>

#include "drs/smoothing.hpp"

namespace drs {

struct ResultRow {
  int index = 0;
  int true_label = 0;
  int verdict = -1;  // -1 encodes ABSTAIN
  double pA_lower = 0.0;
  double radius = 0.0;
  NormKind norm_kind = NormKind::L1;
  bool correct = false;
  double wall_time_ms = 0.0;
};

// Fraction of rows that are correct with radius >= r.
double certified_accuracy(const std::vector<ResultRow>& rows, double r);

// Mean radius with misclassified rows zeroed.
double average_certified_radius(const std::vector<ResultRow>& rows);

void write_result_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> read_result_csv(const std::string& path);

// Subcommands: train, certify, attack, warp, report, synth.
// Exit codes: 0 success, 1 usage error, 2 data error.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace drs

#endif
