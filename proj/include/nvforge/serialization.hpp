#pragma once

// CSV and JSON encodings of module results. Numbers are written with '.'
// decimals regardless of locale.

#include "nvforge/error_budget.hpp"
#include "nvforge/gates.hpp"
#include "nvforge/grape.hpp"
#include "nvforge/tomography.hpp"
#include "nvforge/zeeman.hpp"

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace nvforge {

/// General notation, 12 significant digits.
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
  std::size_t columns_;
};

nlohmann::json complex_to_json(Complex z);
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GatePrimitive& p);
nlohmann::json to_json(const GateSequence& seq);
nlohmann::json to_json(const GateCensus& c);
nlohmann::json to_json(const FieldWindow& w);
nlohmann::json to_json(const ErrorParams& p);
nlohmann::json to_json(const ErrorBudget& b);
nlohmann::json to_json(const ProcessMatrix& chi);

/// Rows of re_0, im_0, re_1, im_1, ... with a header row.
void write_unitary_csv(std::ostream& os, const ComplexMatrix& u);

void write_transitions_csv(std::ostream& os, const std::vector<TransitionSample>& samples);

/// slice_index, t_start_us, control, amplitude_mhz.
void write_pulses_csv(std::ostream& os, const PulseSequence& pulses,
                      const std::vector<std::string>& control_names);

void write_fidelity_trace_csv(std::ostream& os, const std::vector<double>& trace);

/// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace nvforge
