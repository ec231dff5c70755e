#pragma once

// Machine-readable output: CSV (header row, comma separators, '.' decimal,
// integers verbatim, reals with 12 significant digits) and JSON with
// snake_case keys matching the record fields. Every JSON payload re-parses
// into the record that produced it.

#include <optional>
#include <string>

#include <json.hpp>

#include "sqrtlab/experiments.hpp"
#include "sqrtlab/expsums.hpp"
#include "sqrtlab/identity.hpp"
#include "sqrtlab/roots.hpp"

namespace sqrtlab {

/// %.12g rendering shared by every CSV writer.
std::string format_real(double x);

void to_json(nlohmann::json& j, const DiscrepancyReport& r);
void from_json(const nlohmann::json& j, DiscrepancyReport& r);

void to_json(nlohmann::json& j, const SweepRow& r);
void from_json(const nlohmann::json& j, SweepRow& r);

void to_json(nlohmann::json& j, const FitResult& r);
void from_json(const nlohmann::json& j, FitResult& r);

void to_json(nlohmann::json& j, const SumValue& r);
void from_json(const nlohmann::json& j, SumValue& r);

void to_json(nlohmann::json& j, const SpacingHistogram& r);
void from_json(const nlohmann::json& j, SpacingHistogram& r);

void to_json(nlohmann::json& j, const CharAvgResult& r);
void from_json(const nlohmann::json& j, CharAvgResult& r);

/// `q,lambda_star,delta_num,delta_den,n_q,char_sum,pi_p,bound,ratio,seed`
std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

/// One cell of a sweep: marker comment, per-q rows, average comment.
std::string sweep_csv_cell(const SweepCell& cell);

/// Full sweep table: header, all cells, optional fit line, completion mark.
std::string sweep_csv(const SweepResult& result);

nlohmann::json sweep_json(const SweepResult& result);

/// Top-level meta object: version, seed, timestamps, generator name.
nlohmann::json make_meta(std::optional<u64> seed);

}  // namespace sqrtlab
