#include "drs/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace drs {

double certified_accuracy(const std::vector<ResultRow>& rows, double r) {
  if (r < 0.0) throw std::invalid_argument("certified_accuracy: r must be >= 0");
  if (rows.empty()) return 0.0;
  long hits = 0;
  for (const ResultRow& row : rows)
    if (row.correct && row.radius >= r) ++hits;
  return static_cast<double>(hits) / rows.size();
}

double average_certified_radius(const std::vector<ResultRow>& rows) {
  if (rows.empty()) return 0.0;
  double sum = 0.0;
  for (const ResultRow& row : rows)
    if (row.correct) sum += row.radius;
  return sum / rows.size();
}

namespace {

constexpr const char* kCsvHeader =
    "index,true_label,verdict,pA_lower,radius,norm_kind,correct,wall_time_ms";

std::string norm_name(NormKind kind) { return kind == NormKind::L1 ? "l1" : "l2"; }

NormKind parse_norm(const std::string& s) {
  if (s == "l1") return NormKind::L1;
  if (s == "l2") return NormKind::L2;
  throw std::runtime_error("result csv: unknown norm kind '" + s + "'");
}

}  // namespace

void write_result_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_result_csv: cannot open " + path);
  out << kCsvHeader << "\n";
  out.precision(17);
  for (const ResultRow& r : rows) {
    out << r.index << ',' << r.true_label << ',' << r.verdict << ',' << r.pA_lower << ','
        << r.radius << ',' << norm_name(r.norm_kind) << ',' << (r.correct ? 1 : 0) << ','
        << r.wall_time_ms << "\n";
  }
}

std::vector<ResultRow> read_result_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_result_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::runtime_error("read_result_csv: bad header in " + path);
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    ResultRow r;
    std::getline(ss, field, ',');
    r.index = std::stoi(field);
    std::getline(ss, field, ',');
    r.true_label = std::stoi(field);
    std::getline(ss, field, ',');
    r.verdict = std::stoi(field);
    std::getline(ss, field, ',');
    r.pA_lower = std::stod(field);
    std::getline(ss, field, ',');
    r.radius = std::stod(field);
    std::getline(ss, field, ',');
    r.norm_kind = parse_norm(field);
    std::getline(ss, field, ',');
    r.correct = field == "1";
    if (!std::getline(ss, field, ','))
      throw std::runtime_error("read_result_csv: short row in " + path);
    r.wall_time_ms = std::stod(field);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace drs
