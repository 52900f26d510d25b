#include "mllab/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "mllab/errors.hpp"

namespace mllab {

const char* const kPanelCsvHeader =
    "subject_id,round,score,mark,bid,phi_hat,effort_seconds,overconfident,"
    "stated_score_r1,male,age,white,excluded";

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw NumericalError("format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_panel_csv(const PanelDataset& panel, std::ostream& os) {
  std::map<int, const SubjectProfile*> subjects;
  for (const auto& s : panel.subjects) subjects[s.id] = &s;
  os << kPanelCsvHeader << "\n";
  for (const auto& r : panel.records) {
    auto it = subjects.find(r.subject_id);
    if (it == subjects.end()) throw DataError("record references unknown subject id");
    const SubjectProfile& s = *it->second;
    os << r.subject_id << ',' << r.round << ',' << r.score << ','
       << format_double(r.mark) << ',' << format_double(r.bid) << ','
       << (r.excluded ? "" : format_double(r.phi_hat)) << ','
       << format_double(r.effort_seconds) << ',' << (s.overconfident ? 1 : 0) << ',';
    if (r.stated_score_round1) os << *r.stated_score_round1;
    os << ',' << (s.male ? 1 : 0) << ',' << s.age << ',' << (s.white ? 1 : 0) << ','
       << (r.excluded ? 1 : 0) << "\n";
  }
}

void write_panel_csv(const PanelDataset& panel, const std::string& path) {
  std::ofstream os(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!os) throw DataError("cannot open for writing: " + path);
  write_panel_csv(panel, os);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_field(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError("unparseable numeric field: '" + s + "'");
  return v;
}

}  // namespace

LongPanel read_panel_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("empty panel file");
  std::vector<std::string> header = split_csv_line(line);
  std::vector<std::string> expected = split_csv_line(kPanelCsvHeader);

  std::map<std::string, int> index;
  for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = static_cast<int>(i);
  std::string missing;
  for (const auto& name : expected)
    if (!index.count(name)) missing += missing.empty() ? name : ", " + name;
  if (!missing.empty()) throw DataError("panel schema missing columns: " + missing);

  std::vector<std::vector<double>> data(expected.size());
  std::vector<int> subject, round;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() < header.size())
      throw DataError("short CSV row: " + line);
    subject.push_back(static_cast<int>(parse_field(fields[index["subject_id"]])));
    round.push_back(static_cast<int>(parse_field(fields[index["round"]])));
    for (std::size_t c = 2; c < expected.size(); ++c)
      data[c].push_back(parse_field(fields[index[expected[c]]]));
  }

  LongPanel panel;
  panel.subject = std::move(subject);
  panel.round = std::move(round);
  int n = panel.rows();
  for (std::size_t c = 2; c < expected.size(); ++c) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = data[c][i];
    panel.columns[expected[c]] = std::move(v);
  }
  return panel;
}

LongPanel read_panel_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open panel file: " + path);
  return read_panel_csv(is);
}

void write_csv(const CsvTable& table, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  for (std::size_t i = 0; i < table.header.size(); ++i)
    os << (i ? "," : "") << table.header[i];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
}

}  // namespace mllab
