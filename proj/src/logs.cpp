#include "amusic/logs.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "amusic/error.hpp"

namespace amusic {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string format_real(Scalar v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_prediction_header(std::ostream& out) {
  out << "query_index,prediction,confidence,technique_runs,ensemble_size,reselection\n";
}

void write_prediction_row(std::ostream& out, const PredictionEntry& e, Index ensemble_size) {
  out << e.query_index << ',' << e.prediction << ',' << format_real(e.confidence) << ','
      << e.technique_runs << ',' << ensemble_size << ',' << (e.reselection ? 1 : 0) << '\n';
}

namespace {

template <typename T>
T parse_field(const std::string& s, std::size_t line_no, const char* name) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::MalformedLog,
                "line " + std::to_string(line_no) + ": bad " + name + " '" + s + "'");
  }
  return v;
}

}  // namespace

PredictionLog read_prediction_log(std::istream& in) {
  PredictionLog log;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  bool size_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("query_index", 0) == 0) continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) {
      throw Error(ErrorCode::MalformedLog, "line " + std::to_string(line_no) + ": expected 6 fields");
    }
    PredictionEntry e;
    e.query_index = parse_field<Index>(cells[0], line_no, "query_index");
    e.prediction = parse_field<Index>(cells[1], line_no, "prediction");
    e.confidence = parse_field<Scalar>(cells[2], line_no, "confidence");
    e.technique_runs = parse_field<Index>(cells[3], line_no, "technique_runs");
    const Index ensemble = parse_field<Index>(cells[4], line_no, "ensemble_size");
    const int resel = parse_field<int>(cells[5], line_no, "reselection");
    if (resel != 0 && resel != 1) {
      throw Error(ErrorCode::MalformedLog, "line " + std::to_string(line_no) + ": reselection must be 0 or 1");
    }
    e.reselection = resel == 1;
    if (e.query_index != static_cast<Index>(log.entries.size())) {
      throw Error(ErrorCode::MalformedLog, "line " + std::to_string(line_no) + ": queries out of order");
    }
    if (size_seen && ensemble != log.ensemble_size) {
      throw Error(ErrorCode::MalformedLog, "line " + std::to_string(line_no) + ": ensemble_size changes");
    }
    if (ensemble < 1) {
      throw Error(ErrorCode::MalformedLog, "line " + std::to_string(line_no) + ": ensemble_size < 1");
    }
    log.ensemble_size = ensemble;
    size_seen = true;
    log.entries.push_back(e);
  }
  if (log.entries.empty()) throw Error(ErrorCode::MalformedLog, "prediction log has no entries");
  return log;
}

void write_correction_header(std::ostream& out) {
  out << "query_index,original_match,corrected_match,magnitude,winning_consistency,corrected\n";
}

void write_correction_row(std::ostream& out, const CorrectionRecord& r) {
  out << r.query_index << ',' << r.original_match << ',' << r.corrected_match << ','
      << format_real(r.correction_magnitude) << ',' << format_real(r.winning_consistency) << ','
      << (r.corrected ? 1 : 0) << '\n';
}

void write_arbitration_header(std::ostream& out, const std::vector<std::string>& ids) {
  out << "query_index,winner,prediction,winner_consistency";
  for (const auto& id : ids) out << ',' << id << "_match," << id << "_magnitude";
  out << '\n';
}

void write_arbitration_row(std::ostream& out, const FrameArbitration& a,
                           const std::vector<std::string>& ids) {
  out << a.query_index << ',' << ids.at(a.winner) << ',' << a.prediction << ','
      << format_real(a.winner_consistency);
  for (std::size_t s = 0; s < ids.size(); ++s) {
    if (const auto* r = a.record_for(s)) {
      out << ',' << r->corrected_match << ',' << format_real(r->correction_magnitude);
    } else {
      out << ",,";
    }
  }
  out << '\n';
}

namespace {

ordered_json id_list(const std::vector<TechniqueSlot>& slots, const std::vector<std::string>& ids) {
  ordered_json out = ordered_json::array();
  for (auto s : slots) out.push_back(ids.at(s));
  return out;
}

ordered_json coverage_map(const VectorX<Scalar>& cov, const std::vector<std::string>& ids) {
  ordered_json out = ordered_json::object();
  for (Index i = 0; i < cov.size(); ++i) out[ids.at(static_cast<std::size_t>(i))] = cov(i);
  return out;
}

}  // namespace

std::string frame_event_json(const StepResult& step, const std::vector<std::string>& ids) {
  ordered_json j;
  j["type"] = "frame";
  j["q"] = step.query_index;
  j["subset"] = id_list(step.subset, ids);
  j["chosen_technique"] = ids.at(step.chosen);
  j["prediction"] = step.prediction;
  j["consistency"] = step.consistency;
  return j.dump();
}

std::string selection_event_json(const SelectionEvent& ev, const std::vector<std::string>& ids) {
  ordered_json j;
  j["type"] = "selection";
  j["q"] = ev.frame;
  j["subset"] = id_list(ev.subset, ids);
  j["coverage"] = coverage_map(ev.coverage, ids);
  return j.dump();
}

std::string window_event_json(const WindowTest& wt) {
  ordered_json j;
  j["type"] = "window";
  j["q"] = wt.frame;
  j["t_statistic"] = std::isfinite(wt.test.t_statistic) ? ordered_json(wt.test.t_statistic)
                                                        : ordered_json(nullptr);
  j["p_value"] = wt.test.p_value;
  j["reject"] = wt.test.reject_h0;
  return j.dump();
}

std::string reselection_event_json(const ReselectionEvent& ev, const std::vector<std::string>& ids) {
  ordered_json j;
  j["type"] = "reselection";
  j["q"] = ev.trigger_frame;
  j["p_value"] = ev.p_value;
  j["old_subset"] = id_list(ev.old_subset, ids);
  j["new_subset"] = id_list(ev.new_subset, ids);
  j["coverage"] = coverage_map(ev.coverage_at_trigger, ids);
  return j.dump();
}

std::string report_to_json(const EvalReport& report) {
  ordered_json j;
  j["queries"] = report.queries;
  j["ensemble_size"] = report.ensemble_size;
  j["accuracy"] = report.accuracy;
  j["auc"] = report.auc;
  j["ptr"] = report.ptr;
  j["reselection_count"] = report.reselection_count;
  ordered_json pts = ordered_json::array();
  for (const auto& p : report.pr_points) {
    pts.push_back({{"precision", p.precision}, {"recall", p.recall}, {"threshold", p.threshold}});
  }
  j["pr_points"] = std::move(pts);
  return j.dump(2) + "\n";
}

void write_pr_csv(std::ostream& out, const std::vector<PrPoint>& points) {
  out << "precision,recall,threshold\n";
  for (const auto& p : points) {
    out << format_real(p.precision) << ',' << format_real(p.recall) << ','
        << format_real(p.threshold) << '\n';
  }
}

std::string coverage_summary_json(const std::vector<std::string>& ids,
                                  const std::vector<Index>& wins) {
  Index total = 0;
  for (Index w : wins) total += w;
  ordered_json j = ordered_json::object();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    j[ids[i]] = total > 0 ? static_cast<Scalar>(wins.at(i)) / static_cast<Scalar>(total) : 0.0;
  }
  return j.dump(2) + "\n";
}

}  // namespace amusic
