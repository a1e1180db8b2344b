#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "amusic/adaptive.hpp"
#include "amusic/evaluation.hpp"

namespace amusic {

/// Shortest text that parses back to the same double.
std::string format_real(Scalar v);

// predictions.csv: query_index,prediction,confidence,technique_runs,ensemble_size,reselection
void write_prediction_header(std::ostream& out);
void write_prediction_row(std::ostream& out, const PredictionEntry& e, Index ensemble_size);
/// Throws MalformedLog on any syntax or consistency problem, including an empty log.
PredictionLog read_prediction_log(std::istream& in);

// corrections.csv: query_index,original_match,corrected_match,magnitude,winning_consistency,corrected
void write_correction_header(std::ostream& out);
void write_correction_row(std::ostream& out, const CorrectionRecord& r);

// arbitration.csv: query_index,winner,prediction,winner_consistency,<id>_match,<id>_magnitude,...
// Techniques that did not run on a frame leave their pair empty.
void write_arbitration_header(std::ostream& out, const std::vector<std::string>& ids);
void write_arbitration_row(std::ostream& out, const FrameArbitration& a,
                           const std::vector<std::string>& ids);

// events.jsonl: one object per line
std::string frame_event_json(const StepResult& step, const std::vector<std::string>& ids);
std::string selection_event_json(const SelectionEvent& ev, const std::vector<std::string>& ids);
std::string window_event_json(const WindowTest& wt);
std::string reselection_event_json(const ReselectionEvent& ev, const std::vector<std::string>& ids);

std::string report_to_json(const EvalReport& report);
void write_pr_csv(std::ostream& out, const std::vector<PrPoint>& points);

/// Overall share of frames won by each technique, keyed by id.
std::string coverage_summary_json(const std::vector<std::string>& ids,
                                  const std::vector<Index>& wins);

}  // namespace amusic
