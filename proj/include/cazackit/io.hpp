#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cazackit/corr.hpp"
#include "cazackit/sim.hpp"

namespace cazackit::io {

/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);
double parse_double(const std::string& s);

void write_sequence_csv(std::ostream& os, const Eigen::VectorXcd& s);
Eigen::VectorXcd read_sequence_csv(std::istream& is);

void write_set_csv(std::ostream& os, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd read_set_csv(std::istream& is);

nlohmann::json sequence_manifest(const ComplexSequence& s);
nlohmann::json set_manifest(const SequenceSet& set);
/// Rebuilds a set from its CSV samples and manifest.
SequenceSet set_from_manifest(const Eigen::MatrixXcd& samples, const nlohmann::json& manifest);

void write_ambiguity_csv(std::ostream& os, const AmbiguitySurface& s);
void write_profile_csv(std::ostream& os, const CorrelationProfile& p);
/// row,col,re,im,abs
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXcd& m);

struct RmsRow {
  std::string case_name;
  double predicted = 0.0;
  double measured = 0.0;
  double rel_err = 0.0;
};
void write_rms_csv(std::ostream& os, const std::vector<RmsRow>& rows);

void write_campaign_header(std::ostream& os);
void write_campaign_rows(std::ostream& os, const CampaignResult& r);
/// Trials numbered consecutively across SINR points, point-major.
void write_trial_dump(std::ostream& os, const CampaignResult& r);

nlohmann::json scenario_json(const SimScenario& s);

/// Splits a CSV line on commas (no quoting; none of the formats need it).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace cazackit::io
