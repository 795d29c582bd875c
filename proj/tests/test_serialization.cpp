#include "nvforge/serialization.hpp"

#include <doctest.h>

#include <stdexcept>

#include <sstream>

using namespace nvforge;

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(2880.0) == "2880");
  CHECK(format_number(1e-5) == "1e-05");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(-24.252) == "-24.252");
}

TEST_CASE("csv writer") {
  std::ostringstream os;
  CsvWriter w(os, {"b_gauss", "frequency_mhz"});
  w.row({"1", "2883.5"});
  CHECK(os.str() == "b_gauss,frequency_mhz\n1,2883.5\n");
  CHECK_THROWS_AS(w.row({"1"}), std::invalid_argument);
  CHECK_THROWS_AS(w.row({"a,b", "1"}), std::invalid_argument);
}

TEST_CASE("matrix json round trip") {
  ComplexMatrix m(2, 2);
  m << Complex(1, 2), Complex(0, -1), Complex(0.5, 0), Complex(-3, 0.25);
  CHECK(matrix_from_json(matrix_to_json(m)) == m);
  CHECK(matrix_from_json(nlohmann::json::parse("[[1, 0], [0, 1]]")) == ComplexMatrix::Identity(2, 2));
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse("[[1, 0], [0]]")), std::invalid_argument);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse("[[\"x\"]]")), std::invalid_argument);
}

TEST_CASE("gate sequence json") {
  const nlohmann::json j = to_json(cnot_from_sqrtswap(0, 1));
  CHECK(j["n_qubits"] == 2);
  CHECK(j["primitives"].size() == 9);
  CHECK(j["primitives"][0]["kind"] == "rotation");
  CHECK(j["primitives"][0]["axis"] == "y");
  CHECK(j["primitives"][2]["kind"] == "flipflop");
  CHECK(j["blocks"].empty());
  const nlohmann::json cz = to_json(cz_sequence(0, 1));
  CHECK(cz["primitives"][2]["kind"] == "zz");
  CHECK(cz["primitives"][3]["kind"] == "global_phase");
}

TEST_CASE("unitary csv interleaves real and imaginary parts") {
  std::ostringstream os;
  write_unitary_csv(os, pauli_y());
  CHECK(os.str() == "re_0,im_0,re_1,im_1\n0,0,0,-1\n0,1,0,0\n");
}

TEST_CASE("budget json has discrepancy notes") {
  const nlohmann::json j = to_json(error_probability(reference_parameters()));
  REQUIRE(j["paper_discrepancy"].size() == 2);
  CHECK(j["paper_discrepancy"][0]["term"] == "p_dip");
  CHECK(j["paper_discrepancy"][0]["published"] == 1.95e-3);
}

TEST_CASE("pulse csv") {
  PulseSequence p{Eigen::MatrixXd::Zero(2, 2), 1.0};
  p.amplitudes(1, 0) = 0.5;
  std::ostringstream os;
  write_pulses_csv(os, p, {"u1x", "u1y"});
  CHECK(os.str() ==
        "slice_index,t_start_us,control_name,amplitude_mhz\n0,0,u1x,0\n0,0,u1y,0\n1,1,u1x,0.5\n1,1,u1y,0\n");
  CHECK_THROWS_AS(write_pulses_csv(os, p, {"u1x"}), std::invalid_argument);
}
