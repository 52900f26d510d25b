#include "mllab/panel.hpp"

#include <limits>

#include "mllab/errors.hpp"

namespace mllab {

const Eigen::VectorXd& LongPanel::col(const std::string& name) const {
  auto it = columns.find(name);
  if (it == columns.end()) throw DataError("panel column missing: " + name);
  return it->second;
}

LongPanel LongPanel::filter(const std::vector<bool>& keep) const {
  LongPanel out;
  int kept = 0;
  for (bool k : keep) kept += k ? 1 : 0;
  out.subject.reserve(kept);
  out.round.reserve(kept);
  for (const auto& [name, values] : columns)
    out.columns[name] = Eigen::VectorXd(kept);
  int j = 0;
  for (int i = 0; i < rows(); ++i) {
    if (!keep[i]) continue;
    out.subject.push_back(subject[i]);
    out.round.push_back(round[i]);
    for (const auto& [name, values] : columns) out.columns[name][j] = values[i];
    ++j;
  }
  return out;
}

LongPanel to_long_panel(const PanelDataset& panel) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  int n = static_cast<int>(panel.records.size());
  LongPanel out;
  out.subject.reserve(n);
  out.round.reserve(n);
  for (const char* name : {"score", "mark", "bid", "phi_hat", "effort_seconds",
                           "overconfident", "stated_score_r1", "male", "age",
                           "white", "excluded"})
    out.columns[name] = Eigen::VectorXd(n);

  std::map<int, const SubjectProfile*> subjects;
  for (const auto& s : panel.subjects) subjects[s.id] = &s;

  for (int i = 0; i < n; ++i) {
    const RoundRecord& r = panel.records[i];
    auto it = subjects.find(r.subject_id);
    if (it == subjects.end())
      throw DataError("record references unknown subject id");
    const SubjectProfile& s = *it->second;
    out.subject.push_back(r.subject_id);
    out.round.push_back(r.round);
    out.columns["score"][i] = r.score;
    out.columns["mark"][i] = r.mark;
    out.columns["bid"][i] = r.bid;
    out.columns["phi_hat"][i] = r.excluded ? nan : r.phi_hat;
    out.columns["effort_seconds"][i] = r.effort_seconds;
    out.columns["overconfident"][i] = s.overconfident ? 1.0 : 0.0;
    out.columns["stated_score_r1"][i] =
        r.stated_score_round1 ? static_cast<double>(*r.stated_score_round1) : nan;
    out.columns["male"][i] = s.male ? 1.0 : 0.0;
    out.columns["age"][i] = s.age;
    out.columns["white"][i] = s.white ? 1.0 : 0.0;
    out.columns["excluded"][i] = r.excluded ? 1.0 : 0.0;
  }
  return out;
}

}  // namespace mllab
