#pragma once

// JSON records for every report type. Reals are printed with 17 significant
// digits so that values survive a text round trip bit for bit.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bernphase/classify.hpp"
#include "bernphase/coupling.hpp"
#include "bernphase/distribution.hpp"
#include "bernphase/measure.hpp"
#include "bernphase/montecarlo.hpp"
#include "bernphase/percolation.hpp"
#include "bernphase/range_group.hpp"
#include "bernphase/recurrence.hpp"

namespace bernphase {

using Json = nlohmann::ordered_json;

inline constexpr const char* kTheoremLabel = "theorem-certified";
inline constexpr const char* kEvidenceLabel = "evidence";

inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void dump_into(std::string& out, const Json& j, int indent, int level) {
  const auto newline = [&](int lv) {
    out += '\n';
    out.append(static_cast<std::size_t>(indent * lv), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(level + 1);
        out += Json(it.key()).dump();
        out += ": ";
        dump_into(out, it.value(), indent, level + 1);
      }
      newline(level);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(level + 1);
        dump_into(out, e, indent, level + 1);
      }
      if (!flat) newline(level);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_real(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Pretty-printed, deterministic rendering (insertion-ordered keys).
inline std::string dump(const Json& j, int indent = 2) {
  std::string out;
  detail::dump_into(out, j, indent, 0);
  out += '\n';
  return out;
}

inline DiscreteMeasure measure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("weights") || !j["weights"].is_array()) {
    detail::fail(ErrorKind::InvalidInput, "measure document must look like {\"weights\": [...]}");
  }
  std::vector<double> w;
  for (const auto& e : j["weights"]) {
    if (!e.is_number()) detail::fail(ErrorKind::InvalidInput, "weights must be numbers");
    w.push_back(e.get<double>());
  }
  return DiscreteMeasure::make(std::move(w));
}

inline DiscreteMeasure load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::fail(ErrorKind::InvalidInput, "cannot open measure file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    detail::fail(ErrorKind::InvalidInput, path + ": " + e.what());
  }
  return measure_from_json(j);
}

inline Json to_json(const DiscreteMeasure& m) {
  return Json{{"weights", std::vector<double>(m.weights().begin(), m.weights().end())}};
}

inline Json to_json(const ScalarDistribution& d) {
  Json atoms = Json::array();
  for (const auto& a : d.atoms()) atoms.push_back(Json::array({a.value, a.prob}));
  return Json{{"atoms", atoms}};
}

inline Json to_json(const SampleSummary& s) {
  return Json{{"count", s.count}, {"mean", s.mean}, {"sd", s.sd}, {"se", s.se}};
}

inline Json to_json(const RangeGroupReport& r) {
  Json j{{"kind", to_string(r.kind)}};
  j["generator"] = r.generator ? Json(*r.generator) : Json(nullptr);
  j["witnesses"] = r.witnesses;
  j["heuristic"] = r.heuristic;
  return j;
}

inline Json to_json(const Classification& c) {
  return Json{{"phase", to_string(c.phase)},
              {"affinity", c.affinity},
              {"threshold", c.threshold},
              {"delta", c.delta},
              {"label", kTheoremLabel}};
}

inline Json to_json(const KriegerFlow& f) {
  Json j{{"type", to_string(f.kind)}};
  j["lambda"] = f.lambda ? Json(*f.lambda) : Json(nullptr);
  return j;
}

inline Json to_json(const KriegerReport& r) {
  return Json{{"lambda_group", to_json(r.lambda_group)},
              {"sigma_group", to_json(r.sigma_group)},
              {"krieger", to_json(r.krieger)},
              {"flow_of_weights", to_json(r.flow_of_weights)},
              {"caveat", r.caveat},
              {"label", kTheoremLabel}};
}

inline Json to_json(const SpectralReport& r) {
  return Json{{"d", r.d},
              {"affinity", r.affinity},
              {"rho_action", r.rho_action},
              {"rho_group", r.rho_group},
              {"regime", to_string(r.regime)},
              {"label", kTheoremLabel}};
}

/// Phase at a scan point, from the affinity alone.
inline const char* scan_phase(double affinity, double threshold) {
  if (std::abs(affinity - threshold) <= kCriticalTolerance) return to_string(Phase::CriticalUnknown);
  return affinity > threshold ? to_string(Phase::WeaklyMixing) : to_string(Phase::Dissipative);
}

inline Json to_json(const PhaseScanResult& r) {
  Json grid = Json::array();
  for (const auto& p : r.grid) grid.push_back(Json::array({p.t, p.affinity}));
  Json j{{"delta", r.delta}, {"threshold", r.threshold}};
  j["t1"] = r.t1 ? Json(*r.t1) : Json(nullptr);
  j["crossings"] = r.crossings;
  j["monotone"] = r.monotone;
  j["label"] = kTheoremLabel;
  j["grid"] = grid;
  return j;
}

inline std::string phase_scan_csv(const PhaseScanResult& r) {
  std::ostringstream out;
  out << "t,affinity,threshold,phase\n";
  for (const auto& p : r.grid) {
    out << format_real(p.t) << ',' << format_real(p.affinity) << ',' << format_real(r.threshold) << ','
        << scan_phase(p.affinity, r.threshold) << '\n';
  }
  return out.str();
}

inline Json to_json(const ConfidenceInterval& c) {
  return Json{{"estimate", c.estimate}, {"lower", c.lower}, {"upper", c.upper}};
}

/// Per-trial curves are left to the CSV rendering.
inline Json to_json(const RecurrenceDiagnostic& d) {
  return Json{{"verdict", to_string(d.verdict)},
              {"label", kEvidenceLabel},
              {"trials", d.log_T.size()},
              {"depths", d.depths},
              {"mean_log_T", d.mean_log_T},
              {"window", Json::array({d.window_begin, d.window_end})},
              {"confidence", d.confidence},
              {"slope", to_json(d.slope)},
              {"tail_slope", to_json(d.tail_slope)},
              {"tail_boundary", d.tail_boundary},
              {"max_relative_increment", d.max_relative_increment},
              {"epsilon", d.epsilon},
              {"truncation_bias", d.truncation_bias}};
}

inline std::string recurrence_csv(const RecurrenceDiagnostic& d) {
  std::ostringstream out;
  out << "trial,depth,log_T\n";
  for (std::size_t i = 0; i < d.log_T.size(); ++i) {
    for (std::size_t n = 0; n < d.log_T[i].size(); ++n) {
      out << i << ',' << d.depths[n] << ',' << format_real(d.log_T[i][n]) << '\n';
    }
  }
  return out.str();
}

inline Json to_json(const BlockLengthResult& r) {
  Json j{{"status", to_string(r.status)}};
  j["M"] = r.M ? Json(*r.M) : Json(nullptr);
  j["probability"] = r.probability;
  j["target"] = r.target;
  j["chernoff_value"] = r.chernoff_value;
  return j;
}

inline Json to_json(const PercolationReport& r) {
  Json j{{"M", r.M},
         {"p", r.p},
         {"branching", r.branching},
         {"children", r.children},
         {"criterion", r.criterion},
         {"supercritical", r.supercritical},
         {"survival", r.survival}};
  if (r.mc) {
    j["mc_survival"] = r.mc->survival;
    j["mc"] = Json{{"label", kEvidenceLabel},
                   {"trials", r.mc->trials},
                   {"depth", r.mc->depth},
                   {"survival", r.mc->survival},
                   {"survival_se", r.mc->survival_se},
                   {"examined_edges", r.mc->examined_edges},
                   {"retained_edges", r.mc->retained_edges},
                   {"retained_fraction", r.mc->retained_fraction},
                   {"retained_se", r.mc->retained_se}};
  } else {
    j["mc_survival"] = nullptr;
  }
  return j;
}

inline Json to_json(const ChiSquareResult& r) {
  return Json{{"statistic", r.statistic},
              {"dof", r.dof},
              {"p_value", r.p_value},
              {"counts", r.counts},
              {"expected", r.expected},
              {"label", kEvidenceLabel}};
}

inline Json to_json(const MartingaleStudy& s) {
  Json w = Json::array(), inc = Json::array();
  for (const auto& x : s.W) w.push_back(to_json(x));
  for (const auto& x : s.increments) inc.push_back(to_json(x));
  return Json{{"label", kEvidenceLabel}, {"trials", s.trials}, {"W", w}, {"increments", inc}};
}

}  // namespace bernphase
