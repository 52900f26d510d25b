#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mllab/csv.hpp"
#include "mllab/errors.hpp"
#include "mllab/panel.hpp"
#include "mllab/protocol.hpp"
#include "mllab/svg.hpp"

using namespace mllab;

TEST_CASE("panel csv round trip preserves every column") {
  PopulationSpec spec;
  spec.n_subjects = 12;
  PanelDataset panel = generate_panel(spec, ExperimentConfig{}, 99);
  std::ostringstream os;
  write_panel_csv(panel, os);

  std::istringstream is(os.str());
  LongPanel loaded = read_panel_csv(is);
  LongPanel direct = to_long_panel(panel);
  REQUIRE(loaded.rows() == direct.rows());
  for (const char* col : {"score", "mark", "bid", "phi_hat", "effort_seconds",
                          "overconfident", "male", "age", "white", "excluded"}) {
    const Eigen::VectorXd& a = loaded.col(col);
    const Eigen::VectorXd& b = direct.col(col);
    for (int i = 0; i < loaded.rows(); ++i) {
      if (std::isnan(b[i]))
        CHECK(std::isnan(a[i]));
      else
        CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("schema violations are reported with the missing columns") {
  std::istringstream is("subject_id,round,score\n1,1,4\n");
  try {
    read_panel_csv(is);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    std::string msg = e.what();
    CHECK(msg.find("mark") != std::string::npos);
    CHECK(msg.find("phi_hat") != std::string::npos);
  }
}

TEST_CASE("csv header matches the published schema exactly") {
  CHECK(std::string(kPanelCsvHeader) ==
        "subject_id,round,score,mark,bid,phi_hat,effort_seconds,overconfident,"
        "stated_score_r1,male,age,white,excluded");
}

TEST_CASE("empty numeric fields load as NaN") {
  std::istringstream is(std::string(kPanelCsvHeader) + "\n" +
                        "1,2,4,2,1.2,,70,1,,1,30,0,1\n");
  LongPanel panel = read_panel_csv(is);
  CHECK(std::isnan(panel.col("phi_hat")[0]));
  CHECK(std::isnan(panel.col("stated_score_r1")[0]));
  CHECK(panel.col("excluded")[0] == 1.0);
}

TEST_CASE("format_double renders shortest round-trip decimals") {
  CHECK(format_double(2.5) == "2.5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::nan("")) == "");
}

TEST_CASE("filter keeps row alignment") {
  PopulationSpec spec;
  spec.n_subjects = 6;
  LongPanel panel = to_long_panel(generate_panel(spec, ExperimentConfig{}, 5));
  std::vector<bool> keep(panel.rows());
  for (int i = 0; i < panel.rows(); ++i) keep[i] = panel.round[i] == 3;
  LongPanel third = panel.filter(keep);
  CHECK(third.rows() == 6);
  for (int i = 0; i < third.rows(); ++i) CHECK(third.round[i] == 3);
}

TEST_CASE("svg output is deterministic and well-formed") {
  auto make = [] {
    SvgFigure fig;
    fig.set_title("paths");
    fig.set_labels("round", "belief");
    fig.set_range(1, 5, 0, 1);
    fig.add_polyline({{1, 0.6}, {2, 0.5}, {3, 0.45}}, "#1f77b4");
    fig.add_hline(0.5, "#2ca02c");
    fig.add_band({1, 2, 3}, {0.3, 0.32, 0.31}, {0.7, 0.68, 0.69}, "#d62728");
    fig.add_scatter({{2, 0.55}}, "#9467bd");
    return fig.str();
  };
  std::string a = make();
  std::string b = make();
  CHECK(a == b);
  CHECK(a.find("<svg") == 0);
  CHECK(a.find("</svg>") != std::string::npos);
  CHECK(a.find("polyline") != std::string::npos);
  CHECK(a.find("NaN") == std::string::npos);
}
