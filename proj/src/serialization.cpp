#include "nvforge/serialization.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <variant>

namespace nvforge {

using nlohmann::json;

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header)
    : os_(os), columns_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::invalid_argument("csv row has the wrong column count");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].find_first_of(",\"\n") != std::string::npos) {
      throw std::invalid_argument("csv cell needs quoting: " + cells[i]);
    }
    if (i) os_ << ',';
    os_ << cells[i];
  }
  os_ << '\n';
}

json complex_to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a non-empty array");
  const auto n_rows = static_cast<Eigen::Index>(j.size());
  const auto n_cols = static_cast<Eigen::Index>(j.at(0).size());
  ComplexMatrix m(n_rows, n_cols);
  for (Eigen::Index r = 0; r < n_rows; ++r) {
    const json& row = j.at(r);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols) {
      throw std::invalid_argument("matrix rows must have equal length");
    }
    for (Eigen::Index c = 0; c < n_cols; ++c) {
      const json& e = row.at(c);
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_object() && e.size() == 2 && e.contains("re") && e.contains("im")) {
        m(r, c) = Complex(e.at("re").get<double>(), e.at("im").get<double>());
      } else {
        throw std::invalid_argument("matrix entries must be numbers or {re, im}");
      }
    }
  }
  return m;
}

json to_json(const GatePrimitive& p) {
  if (const auto* r = std::get_if<Rotation>(&p)) {
    return {{"kind", "rotation"},
            {"axis", std::string(1, to_char(r->axis))},
            {"angle_rad", r->angle},
            {"qubit", r->qubit}};
  }
  if (const auto* z = std::get_if<ZZEvolution>(&p)) {
    return {{"kind", "zz"}, {"angle_rad", z->angle}, {"qubits", {z->qubit_a, z->qubit_b}}};
  }
  if (const auto* f = std::get_if<FlipFlopEvolution>(&p)) {
    return {{"kind", "flipflop"}, {"nu_t", f->nu_t}, {"qubits", {f->qubit_a, f->qubit_b}}};
  }
  return {{"kind", "global_phase"}, {"angle_rad", std::get<GlobalPhase>(p).angle}};
}

json to_json(const GateSequence& seq) {
  json prims = json::array();
  for (const GatePrimitive& p : seq.primitives) prims.push_back(to_json(p));
  json blocks = json::array();
  for (const GateBlock& b : seq.blocks) {
    blocks.push_back({{"label", b.label}, {"begin", b.begin}, {"end", b.end}});
  }
  return {{"n_qubits", seq.n_qubits}, {"primitives", prims}, {"blocks", blocks}};
}

json to_json(const GateCensus& c) {
  return {{"cnot", c.cnot}, {"single", c.single}, {"flipflop", c.flipflop}, {"zz", c.zz}};
}

json to_json(const FieldWindow& w) {
  return {{"b_min_gauss", w.b_min}, {"b_max_gauss", w.b_max}, {"span_mhz", w.span_mhz}};
}

json to_json(const ErrorParams& p) {
  return {{"t_us", p.t_us},
          {"t1_ms", p.t1_ms},
          {"t2_ms", p.t2_ms},
          {"delta1_khz", p.delta1_khz},
          {"omega_mw_khz", p.omega_mw_khz},
          {"omega_opt_mhz", p.omega_opt_mhz},
          {"delta_mag_mhz", p.delta_mag_mhz},
          {"delta_str_mhz", p.delta_str_mhz},
          {"nu_dip_khz", p.nu_dip_khz}};
}

json to_json(const ErrorBudget& b) {
  json notes = json::array();
  for (const DiscrepancyNote& n : b.discrepancies) {
    notes.push_back({{"term", n.term},
                     {"computed", n.computed},
                     {"published", n.published},
                     {"note", n.note}});
  }
  return {{"p_t1", b.p_t1},   {"p_t2", b.p_t2},   {"p_mw", b.p_mw},
          {"p_mag", b.p_mag}, {"p_str", b.p_str}, {"p_dip", b.p_dip},
          {"total", b.total}, {"paper_discrepancy", notes}};
}

json to_json(const ProcessMatrix& chi) {
  return {{"n_qubits", chi.n_qubits}, {"basis", chi.labels}, {"chi", matrix_to_json(chi.chi)}};
}

void write_unitary_csv(std::ostream& os, const ComplexMatrix& u) {
  std::vector<std::string> header;
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    header.push_back("re_" + std::to_string(c));
    header.push_back("im_" + std::to_string(c));
  }
  CsvWriter w(os, header);
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    std::vector<std::string> cells;
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      cells.push_back(format_number(u(r, c).real()));
      cells.push_back(format_number(u(r, c).imag()));
    }
    w.row(cells);
  }
}

void write_transitions_csv(std::ostream& os, const std::vector<TransitionSample>& samples) {
  CsvWriter w(os, {"b_gauss", "orientation", "transition_label", "frequency_mhz"});
  for (const TransitionSample& s : samples) {
    w.row({format_number(s.b_gauss), s.orientation, s.transition_label,
           format_number(s.frequency_mhz)});
  }
}

void write_pulses_csv(std::ostream& os, const PulseSequence& pulses,
                      const std::vector<std::string>& control_names) {
  if (static_cast<Eigen::Index>(control_names.size()) != pulses.amplitudes.cols()) {
    throw std::invalid_argument("one name per control column is required");
  }
  CsvWriter w(os, {"slice_index", "t_start_us", "control_name", "amplitude_mhz"});
  for (Eigen::Index k = 0; k < pulses.amplitudes.rows(); ++k) {
    for (Eigen::Index j = 0; j < pulses.amplitudes.cols(); ++j) {
      w.row({std::to_string(k), format_number(static_cast<double>(k) * pulses.slice_us),
             control_names[j], format_number(pulses.amplitudes(k, j))});
    }
  }
}

void write_fidelity_trace_csv(std::ostream& os, const std::vector<double>& trace) {
  CsvWriter w(os, {"iteration", "fidelity"});
  for (std::size_t i = 0; i < trace.size(); ++i) w.row({std::to_string(i), format_number(trace[i])});
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

}  // namespace nvforge
