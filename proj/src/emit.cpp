#include "sqrtlab/emit.hpp"

#include <chrono>
#include <cstdio>

#include "sqrtlab/version.hpp"

namespace sqrtlab {

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void to_json(nlohmann::json& j, const DiscrepancyReport& r) {
  j = nlohmann::json{
      {"delta_numerator", r.delta_numerator},
      {"denominator", r.denominator},
      {"interval", {r.interval_y + 1, r.interval_y + r.interval_x}},
      {"count_in_interval", r.count_in_interval},
      {"pi_p", r.pi_p},
      {"delta", r.delta()},
  };
}

void from_json(const nlohmann::json& j, DiscrepancyReport& r) {
  r.delta_numerator = j.at("delta_numerator").get<u64>();
  r.denominator = j.at("denominator").get<u64>();
  const auto lo = j.at("interval").at(0).get<u64>();
  const auto hi = j.at("interval").at(1).get<u64>();
  r.interval_y = lo - 1;
  r.interval_x = hi - lo + 1;
  r.count_in_interval = j.at("count_in_interval").get<u64>();
  r.pi_p = j.at("pi_p").get<u64>();
}

void to_json(nlohmann::json& j, const SweepRow& r) {
  j = nlohmann::json{
      {"q", r.q},
      {"lambda_star", r.lambda_star},
      {"delta_scaled", r.delta_scaled},
      {"n_q", r.n_q},
      {"char_sum", r.char_sum},
      {"pi_p", r.pi_p},
      {"bound_value", r.bound_value},
      {"seed", r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr)},
  };
}

void from_json(const nlohmann::json& j, SweepRow& r) {
  r.q = j.at("q").get<u64>();
  r.lambda_star = j.at("lambda_star").get<u64>();
  r.delta_scaled = j.at("delta_scaled").get<u64>();
  r.n_q = j.at("n_q").get<u64>();
  r.char_sum = j.at("char_sum").get<i64>();
  r.pi_p = j.at("pi_p").get<u64>();
  r.bound_value = j.at("bound_value").get<double>();
  const auto& seed = j.at("seed");
  r.seed = seed.is_null() ? std::nullopt : std::optional<u64>(seed.get<u64>());
}

void to_json(nlohmann::json& j, const FitResult& r) {
  j = nlohmann::json{
      {"slope", r.slope},
      {"intercept", r.intercept},
      {"r_squared", r.r_squared},
      {"points", r.points},
  };
}

void from_json(const nlohmann::json& j, FitResult& r) {
  r.slope = j.at("slope").get<double>();
  r.intercept = j.at("intercept").get<double>();
  r.r_squared = j.at("r_squared").get<double>();
  r.points = j.at("points").get<u64>();
}

void to_json(nlohmann::json& j, const SumValue& r) {
  j = nlohmann::json{
      {"value_re", r.value.real()},
      {"value_im", r.value.imag()},
      {"terms", r.terms},
      {"kernel_evals", r.kernel_evals},
      {"trivial_bound", r.trivial_bound},
  };
}

void from_json(const nlohmann::json& j, SumValue& r) {
  r.value = {j.at("value_re").get<double>(), j.at("value_im").get<double>()};
  r.terms = j.at("terms").get<u64>();
  r.kernel_evals = j.at("kernel_evals").get<u64>();
  r.trivial_bound = j.at("trivial_bound").get<double>();
}

void to_json(nlohmann::json& j, const SpacingHistogram& r) {
  j = nlohmann::json{
      {"edges", r.edges},         {"counts", r.counts},
      {"points", r.points},       {"collisions", r.collisions},
      {"mean_gap", r.mean_gap},   {"sup_distance", r.sup_distance},
  };
}

void from_json(const nlohmann::json& j, SpacingHistogram& r) {
  r.edges = j.at("edges").get<std::vector<double>>();
  r.counts = j.at("counts").get<std::vector<u64>>();
  r.points = j.at("points").get<u64>();
  r.collisions = j.at("collisions").get<u64>();
  r.mean_gap = j.at("mean_gap").get<double>();
  r.sup_distance = j.at("sup_distance").get<double>();
}

void to_json(nlohmann::json& j, const CharAvgResult& r) {
  j = nlohmann::json{
      {"avg_abs_dev", r.avg_abs_dev},   {"second_moment", r.second_moment},
      {"ratio_first", r.ratio_first},   {"ratio_second", r.ratio_second},
      {"q2_excluded", r.q2_excluded},
  };
}

void from_json(const nlohmann::json& j, CharAvgResult& r) {
  r.avg_abs_dev = j.at("avg_abs_dev").get<double>();
  r.second_moment = j.at("second_moment").get<double>();
  r.ratio_first = j.at("ratio_first").get<double>();
  r.ratio_second = j.at("ratio_second").get<double>();
  r.q2_excluded = j.at("q2_excluded").get<bool>();
}

std::string sweep_csv_header() {
  return "q,lambda_star,delta_num,delta_den,n_q,char_sum,pi_p,bound,ratio,"
         "seed\n";
}

std::string sweep_csv_row(const SweepRow& row) {
  const double delta = static_cast<double>(row.delta_scaled) /
                       static_cast<double>(row.q);
  std::string out;
  out += std::to_string(row.q);
  out += ',';
  out += std::to_string(row.lambda_star);
  out += ',';
  out += std::to_string(row.delta_scaled);
  out += ',';
  out += std::to_string(row.q);
  out += ',';
  out += std::to_string(row.n_q);
  out += ',';
  out += std::to_string(row.char_sum);
  out += ',';
  out += std::to_string(row.pi_p);
  out += ',';
  out += format_real(row.bound_value);
  out += ',';
  out += format_real(delta / row.bound_value);
  out += ',';
  if (row.seed) out += std::to_string(*row.seed);
  out += '\n';
  return out;
}

std::string sweep_csv_cell(const SweepCell& cell) {
  std::string out;
  out += "# cell p=" + format_real(cell.p) + " q=" + format_real(cell.q) +
         "\n";
  for (const auto& row : cell.result.rows) out += sweep_csv_row(row);
  out += "# cell_avg p=" + format_real(cell.p) + " q=" + format_real(cell.q) +
         " average=" + format_real(cell.result.average) +
         " bound=" + format_real(cell.result.bound) +
         " ratio=" + format_real(cell.result.ratio) + "\n";
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = sweep_csv_header();
  for (const auto& cell : result.cells) out += sweep_csv_cell(cell);
  if (result.fit) {
    out += "# fit slope=" + format_real(result.fit->slope) +
           " intercept=" + format_real(result.fit->intercept) +
           " r_squared=" + format_real(result.fit->r_squared) +
           " points=" + std::to_string(result.fit->points) + "\n";
  }
  out += "# complete\n";
  return out;
}

nlohmann::json sweep_json(const SweepResult& result) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : result.cells) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : cell.result.rows) rows.push_back(row);
    cells.push_back({
        {"p", cell.p},
        {"q", cell.q},
        {"average", cell.result.average},
        {"bound", cell.result.bound},
        {"ratio", cell.result.ratio},
        {"q2_excluded", cell.result.q2_excluded},
        {"rows", std::move(rows)},
    });
  }
  nlohmann::json j{{"cells", std::move(cells)}};
  if (result.fit) j["fit"] = *result.fit;
  return j;
}

nlohmann::json make_meta(std::optional<u64> seed) {
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return nlohmann::json{
      {"version", kVersion},
      {"seed", seed ? nlohmann::json(*seed) : nlohmann::json(nullptr)},
      {"timestamp", stamp},
      {"rng", kRngName},
  };
}

}  // namespace sqrtlab
