#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mllab/panel.hpp"
#include "mllab/protocol.hpp"

namespace mllab {

/// Shortest-round-trip decimal rendering; '.' separator, locale-free.
std::string format_double(double v);

/// Panel CSV schema (exact header, LF line endings):
/// subject_id,round,score,mark,bid,phi_hat,effort_seconds,overconfident,
/// stated_score_r1,male,age,white,excluded
extern const char* const kPanelCsvHeader;

void write_panel_csv(const PanelDataset& panel, std::ostream& os);
void write_panel_csv(const PanelDataset& panel, const std::string& path);

/// Reads a panel CSV back into long format. Missing schema columns raise
/// DataError listing every missing name. Empty numeric fields parse as NaN.
LongPanel read_panel_csv(const std::string& path);
LongPanel read_panel_csv(std::istream& is);

/// Generic rectangular CSV writer for result tables.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
void write_csv(const CsvTable& table, const std::string& path);

}  // namespace mllab
