// sqrtlab: one subcommand per object of study. Results go to stdout or
// --out; --format selects plain, csv or json. Exit codes: 0 success,
// 2 usage error, 1 runtime failure.

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqrtlab/cache.hpp"
#include "sqrtlab/config.hpp"
#include "sqrtlab/emit.hpp"
#include "sqrtlab/experiments.hpp"
#include "sqrtlab/expsums.hpp"
#include "sqrtlab/identity.hpp"
#include "sqrtlab/parallel.hpp"
#include "sqrtlab/selfcheck.hpp"
#include "sqrtlab/version.hpp"

namespace {

using namespace sqrtlab;
using nlohmann::json;

struct Output {
  std::string format = "plain";
  std::string path;  // empty = stdout

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      if (!std::cout) throw std::runtime_error("write to stdout failed");
      return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
  }
};

std::string complex_str(std::complex<double> z) {
  return format_real(z.real()) + (z.imag() < 0 ? " - " : " + ") +
         format_real(std::abs(z.imag())) + "i";
}

json sum_json(const SumValue& s) {
  json j = s;
  return j;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = std::stod(item, &used);
    if (used != item.size())
      throw std::invalid_argument("cannot parse number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

WeightVector parse_weights(const std::string& text) {
  std::vector<std::complex<double>> v;
  for (double x : parse_real_list(text)) v.emplace_back(x, 0.0);
  return WeightVector::from(std::move(v));
}

LambdaStrategy make_strategy(const std::string& name, u64 samples, u64 seed) {
  if (name == "full") return LambdaStrategy::full();
  if (name == "sample") {
    if (samples == 0)
      throw std::invalid_argument("sample strategy needs --samples >= 1");
    return LambdaStrategy::sample(samples, seed);
  }
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

std::string discrepancy_plain(u64 lambda, const DiscrepancyReport& r) {
  std::ostringstream out;
  out << "lambda = " << lambda << "\n"
      << "delta = " << r.delta_numerator << "/" << r.denominator << " = "
      << format_real(r.delta()) << "\n"
      << "interval = [" << r.interval_y + 1 << ", "
      << r.interval_y + r.interval_x << "]\n"
      << "count_in_interval = " << r.count_in_interval << "\n"
      << "pi_p = " << r.pi_p << "\n";
  return out.str();
}

std::string discrepancy_csv(u64 q, u64 lambda, const DiscrepancyReport& r) {
  std::ostringstream out;
  out << "q,lambda,delta_num,delta_den,delta,interval_lo,interval_hi,"
         "count_in_interval,pi_p\n"
      << q << ',' << lambda << ',' << r.delta_numerator << ','
      << r.denominator << ',' << format_real(r.delta()) << ','
      << r.interval_y + 1 << ',' << r.interval_y + r.interval_x << ','
      << r.count_in_interval << ',' << r.pi_p << "\n";
  return out.str();
}

std::string avg_csv(const AvgResult& r) {
  std::string out = sweep_csv_header();
  for (const auto& row : r.rows) out += sweep_csv_row(row);
  out += "# average=" + format_real(r.average) +
         " bound=" + format_real(r.bound) + " ratio=" + format_real(r.ratio) +
         "\n";
  return out;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"modular square roots of primes: root sets, discrepancies, "
               "exponential sums and averaged experiments"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Output output;
  unsigned threads = 0;
  app.add_option("--format", output.format, "plain | csv | json")
      ->check(CLI::IsMember({"plain", "csv", "json"}));
  app.add_option("--out", output.path, "write results to this file");
  app.add_option("--threads", threads,
                 "worker threads (0 = hardware parallelism)");

  std::function<std::string()> runner;

  // Single-letter long options like --h need the short -h help flag gone.
  app.set_help_flag("--help", "print help and exit");
  auto add_cmd = [&app](const char* name, const char* desc) {
    auto* cmd = app.add_subcommand(name, desc);
    cmd->set_help_flag("--help", "print help and exit");
    cmd->fallthrough();  // global --format/--out/--threads after the verb
    return cmd;
  };

  // ---- sieve ----
  {
    auto* cmd = add_cmd("sieve", "primes up to a limit");
    auto limit = std::make_shared<u64>(0);
    auto budget = std::make_shared<u64>(PrimeTable::kDefaultBudget);
    auto count_only = std::make_shared<bool>(false);
    cmd->add_option("--limit", *limit, "sieve bound")->required();
    cmd->add_option("--budget", *budget, "largest allowed limit");
    cmd->add_flag("--count-only", *count_only, "print only pi(limit)");
    cmd->callback([&runner, limit, budget, count_only, &output] {
      runner = [=, &output]() -> std::string {
        PrimeTable table(*limit, *budget);
        if (output.format == "json") {
          json j{{"limit", table.limit()},
                 {"count", table.primes().size()},
                 {"meta", make_meta(std::nullopt)}};
          if (!*count_only) j["primes"] = table.primes();
          return j.dump(2) + "\n";
        }
        if (*count_only)
          return std::to_string(table.primes().size()) + "\n";
        std::string out;
        for (u64 p : table.primes()) {
          out += std::to_string(p);
          out += '\n';
        }
        return out;
      };
    });
  }

  // ---- sqrt ----
  {
    auto* cmd = add_cmd("sqrt", "square roots of a mod prime q");
    auto q = std::make_shared<u64>(0);
    auto a = std::make_shared<u64>(0);
    cmd->add_option("--q", *q, "prime modulus")->required();
    cmd->add_option("--a", *a, "residue")->required();
    cmd->callback([&runner, q, a, &output] {
      runner = [=, &output]() -> std::string {
        Modulus mod(*q);
        auto roots = sqrt_mod(*a, mod);
        if (output.format == "json") {
          json j{{"q", *q}, {"a", *a}, {"roots", roots},
                 {"meta", make_meta(std::nullopt)}};
          return j.dump(2) + "\n";
        }
        std::string out;
        for (std::size_t i = 0; i < roots.size(); ++i) {
          if (i) out += ' ';
          out += std::to_string(roots[i]);
        }
        out += '\n';
        return out;
      };
    });
  }

  // ---- jacobi ----
  {
    auto* cmd = add_cmd("jacobi", "Jacobi symbol (k/q)");
    auto k = std::make_shared<i64>(0);
    auto q = std::make_shared<u64>(0);
    cmd->add_option("--k", *k, "numerator")->required();
    cmd->add_option("--q", *q, "odd modulus >= 3")->required();
    cmd->callback([&runner, k, q, &output] {
      runner = [=, &output]() -> std::string {
        int value = jacobi(*k, *q);
        if (output.format == "json") {
          json j{{"k", *k}, {"q", *q}, {"value", value},
                 {"meta", make_meta(std::nullopt)}};
          return j.dump(2) + "\n";
        }
        return std::to_string(value) + "\n";
      };
    });
  }

  // ---- gauss ----
  {
    auto* cmd = add_cmd("gauss", "Gauss sum G_q(a,b)");
    auto q = std::make_shared<u64>(0);
    auto a = std::make_shared<u64>(1);
    auto b = std::make_shared<u64>(0);
    auto method = std::make_shared<std::string>("both");
    cmd->add_option("--q", *q, "odd modulus >= 3")->required();
    cmd->add_option("--a", *a, "quadratic coefficient, unit mod q");
    cmd->add_option("--b", *b, "linear coefficient");
    cmd->add_option("--method", *method, "direct | closed | both")
        ->check(CLI::IsMember({"direct", "closed", "both"}));
    cmd->callback([&runner, q, a, b, method, &output] {
      runner = [=, &output]() -> std::string {
        Modulus mod(*q);
        json j{{"q", *q}, {"a", *a}, {"b", *b}};
        std::ostringstream plain;
        if (*method != "closed") {
          auto g = gauss_sum_direct(*a, *b, mod);
          plain << "direct = " << complex_str(g) << "\n";
          j["direct_re"] = g.real();
          j["direct_im"] = g.imag();
          j["abs_direct"] = std::abs(g);
        }
        if (*method != "direct") {
          auto g = gauss_sum_closed(*a, *b, mod);
          plain << "closed = " << complex_str(g) << "\n";
          j["closed_re"] = g.real();
          j["closed_im"] = g.imag();
        }
        plain << "sqrt_q = " << format_real(std::sqrt(double(*q))) << "\n";
        if (output.format == "json") {
          j["meta"] = make_meta(std::nullopt);
          return j.dump(2) + "\n";
        }
        return plain.str();
      };
    });
  }

  // ---- discrepancy ----
  {
    auto* cmd =
        add_cmd("discrepancy", "exact Delta_{lambda,q}(P)");
    auto q = std::make_shared<u64>(0);
    auto lambda = std::make_shared<u64>(1);
    auto p_max = std::make_shared<double>(0);
    cmd->add_option("--q", *q, "prime modulus")->required();
    cmd->add_option("--lambda", *lambda, "unit multiplier");
    cmd->add_option("--p-max", *p_max, "prime cutoff P")->required();
    cmd->callback([&runner, q, lambda, p_max, &output] {
      runner = [=, &output]() -> std::string {
        Modulus mod(*q);
        PrimeTable primes(std::max<u64>(2, static_cast<u64>(*p_max)));
        auto rs = build_root_set(mod, *lambda, *p_max, primes);
        auto report = discrepancy(rs);
        if (output.format == "json") {
          json j = report;
          j["q"] = *q;
          j["lambda"] = *lambda;
          j["p_max"] = *p_max;
          j["n_residue_primes"] = rs.n_residue_primes;
          j["meta"] = make_meta(std::nullopt);
          return j.dump(2) + "\n";
        }
        if (output.format == "csv") return discrepancy_csv(*q, *lambda, report);
        return discrepancy_plain(*lambda, report);
      };
    });
  }

  // ---- maxlambda ----
  {
    auto* cmd = add_cmd(
        "maxlambda", "maximize Delta_{lambda,q}(P) over lambda");
    auto q = std::make_shared<u64>(0);
    auto p_max = std::make_shared<double>(0);
    auto strategy = std::make_shared<std::string>("full");
    auto samples = std::make_shared<u64>(0);
    auto seed = std::make_shared<u64>(0);
    auto full_limit = std::make_shared<u64>(kDefaultFullLambdaLimit);
    cmd->add_option("--q", *q, "prime modulus")->required();
    cmd->add_option("--p-max", *p_max, "prime cutoff P")->required();
    cmd->add_option("--strategy", *strategy, "full | sample")
        ->check(CLI::IsMember({"full", "sample"}));
    cmd->add_option("--samples", *samples, "lambda draws for sample");
    cmd->add_option("--seed", *seed, "RNG seed for sample");
    cmd->add_option("--full-limit", *full_limit,
                    "largest q allowed for full enumeration");
    cmd->callback([&runner, q, p_max, strategy, samples, seed, full_limit,
                   &output] {
      runner = [=, &output]() -> std::string {
        Modulus mod(*q);
        PrimeTable primes(std::max<u64>(2, static_cast<u64>(*p_max)));
        auto strat = make_strategy(*strategy, *samples, *seed);
        auto [lambda_star, report] =
            max_discrepancy_over_lambda(mod, *p_max, primes, strat,
                                        *full_limit);
        if (output.format == "json") {
          json j = report;
          j["q"] = *q;
          j["lambda_star"] = lambda_star;
          j["p_max"] = *p_max;
          j["strategy"] = *strategy;
          j["meta"] = make_meta(
              strat.kind == LambdaStrategy::Kind::sample
                  ? std::optional<u64>(*seed)
                  : std::nullopt);
          return j.dump(2) + "\n";
        }
        if (output.format == "csv")
          return discrepancy_csv(*q, lambda_star, report);
        return "lambda_star = " + std::to_string(lambda_star) + "\n" +
               discrepancy_plain(lambda_star, report);
      };
    });
  }

  // ---- weyl ----
  {
    auto* cmd = add_cmd("weyl", "Weyl sum S_q(h,P)");
    auto q = std::make_shared<u64>(0);
    auto h = std::make_shared<u64>(1);
    auto p_max = std::make_shared<double>(0);
    cmd->add_option("--q", *q, "prime modulus")->required();
    cmd->add_option("--h", *h, "frequency, unit mod q");
    cmd->add_option("--p-max", *p_max, "prime cutoff P")->required();
    cmd->callback([&runner, q, h, p_max, &output] {
      runner = [=, &output]() -> std::string {
        Modulus mod(*q);
        PrimeTable primes(std::max<u64>(2, static_cast<u64>(*p_max)));
        auto s = weyl_sum_S(mod, *h, *p_max, primes);
        if (output.format == "json") {
          json j = sum_json(s);
          j["q"] = *q;
          j["h"] = *h;
          j["p_max"] = *p_max;
          j["meta"] = make_meta(std::nullopt);
          return j.dump(2) + "\n";
        }
        return "S = " + complex_str(s.value) +
               "  (terms=" + std::to_string(s.terms) +
               ", trivial_bound=" + format_real(s.trivial_bound) + ")\n";
      };
    });
  }

  // ---- bilinear ----
  {
    auto* cmd = add_cmd("bilinear", "bilinear form W_{a,q}");
    auto q = std::make_shared<u64>(0);
    auto a = std::make_shared<u64>(1);
    auto h = std::make_shared<u64>(1);
    auto alpha = std::make_shared<std::string>();
    auto beta = std::make_shared<std::string>();
    auto m = std::make_shared<u64>(0);
    auto n = std::make_shared<u64>(0);
    cmd->add_option("--q", *q, "odd modulus >= 3")->required();
    cmd->add_option("--a", *a, "unit mod q");
    cmd->add_option("--h", *h, "frequency, unit mod q");
    cmd->add_option("--alpha", *alpha, "comma-separated weights");
    cmd->add_option("--beta", *beta, "comma-separated weights");
    cmd->add_option("--m", *m, "use all-ones alpha of this length");
    cmd->add_option("--n", *n, "use all-ones beta of this length");
    cmd->callback([&runner, q, a, h, alpha, beta, m, n, &output] {
      runner = [=, &output]() -> std::string {
        Modulus mod(*q);
        WeightVector wa = alpha->empty()
                              ? WeightVector::ones(*m ? *m : 1)
                              : parse_weights(*alpha);
        WeightVector wb = beta->empty() ? WeightVector::ones(*n ? *n : 1)
                                        : parse_weights(*beta);
        auto w = bilinear_W(mod, *a, *h, wa, wb);
        if (output.format == "json") {
          json j = sum_json(w);
          j["q"] = *q;
          j["a"] = *a;
          j["h"] = *h;
          j["m"] = wa.size();
          j["n"] = wb.size();
          j["normalized"] = wa.normalized() && wb.normalized();
          j["meta"] = make_meta(std::nullopt);
          return j.dump(2) + "\n";
        }
        return "W = " + complex_str(w.value) +
               "  (terms=" + std::to_string(w.terms) +
               ", trivial_bound=" + format_real(w.trivial_bound) + ")\n";
      };
    });
  }

  // ---- incomplete ----
  {
    auto* cmd =
        add_cmd("incomplete", "incomplete square-root sum");
    auto q = std::make_shared<u64>(0);
    auto a = std::make_shared<u64>(1);
    auto h = std::make_shared<u64>(1);
    auto w = std::make_shared<u64>(0);
    cmd->add_option("--q", *q, "prime modulus")->required();
    cmd->add_option("--a", *a, "unit mod q");
    cmd->add_option("--h", *h, "frequency, unit mod q");
    cmd->add_option("--w", *w, "upper limit W <= q")->required();
    cmd->callback([&runner, q, a, h, w, &output] {
      runner = [=, &output]() -> std::string {
        Modulus mod(*q);
        auto s = incomplete_sqrt_sum(mod, *a, *h, *w);
        if (output.format == "json") {
          json j = sum_json(s.sum);
          j["q"] = *q;
          j["a"] = *a;
          j["h"] = *h;
          j["w"] = *w;
          j["lemma_ratio"] = s.lemma_ratio;
          j["meta"] = make_meta(std::nullopt);
          return j.dump(2) + "\n";
        }
        return "sum = " + complex_str(s.sum.value) +
               "\nlemma_ratio = " + format_real(s.lemma_ratio) + "\n";
      };
    });
  }

  // ---- bounds ----
  {
    auto* cmd = add_cmd(
        "bounds", "normalized bound formulas at given sizes");
    auto m = std::make_shared<double>(1);
    auto n = std::make_shared<double>(1);
    auto big_q = std::make_shared<double>(1);
    auto p = std::make_shared<double>(0);
    cmd->add_option("--m", *m, "M");
    cmd->add_option("--n", *n, "N");
    cmd->add_option("--big-q", *big_q, "Q")->required();
    cmd->add_option("--p", *p, "P (enables theorem bound and parameters)");
    cmd->callback([&runner, m, n, big_q, p, &output] {
      runner = [=, &output]() -> std::string {
        const double b = bound_B(*m, *n, *big_q);
        const auto [b1, b2] = bounds_old(*m, *n, *big_q);
        json j{{"m", *m},        {"n", *n},       {"q", *big_q},
               {"bound_b", b},   {"bound_old_1", b1},
               {"bound_old_2", b2}};
        std::ostringstream plain;
        plain << "bound_B = " << format_real(b) << "\n"
              << "bound_old_1 = " << format_real(b1) << "\n"
              << "bound_old_2 = " << format_real(b2) << "\n";
        if (*p > 0) {
          const double tb = theorem_bound(*p, *big_q);
          const auto params = optimized_parameters(*p, *big_q);
          j["p"] = *p;
          j["theorem_bound"] = tb;
          j["l"] = params.L;
          j["s"] = params.S;
          j["u"] = params.U;
          plain << "theorem_bound = " << format_real(tb) << "\n"
                << "L = " << format_real(params.L)
                << "  S = " << format_real(params.S)
                << "  U = " << format_real(params.U) << "\n";
        }
        if (output.format == "json") {
          j["meta"] = make_meta(std::nullopt);
          return j.dump(2) + "\n";
        }
        return plain.str();
      };
    });
  }

  // ---- hb-verify ----
  {
    auto* cmd = add_cmd(
        "hb-verify", "exhaustively check the Heath-Brown identity");
    auto folds = std::make_shared<unsigned>(1);
    auto n_max = std::make_shared<u64>(10000);
    auto z = std::make_shared<u64>(0);
    cmd->add_option("--j", *folds, "number of folds J")->required();
    cmd->add_option("--n-max", *n_max, "verification range");
    cmd->add_option("--z", *z, "mu cutoff (default ceil(n_max^{1/J}))");
    cmd->callback([&runner, folds, n_max, z, &output] {
      runner = [=, &output]() -> std::string {
        u64 cutoff = *z;
        if (cutoff == 0)
          cutoff = static_cast<u64>(std::ceil(
              std::pow(static_cast<double>(*n_max), 1.0 / *folds)));
        HBParams params{*folds, cutoff, *n_max};
        const double deviation = verify_hb_range(params);
        if (output.format == "json") {
          json j{{"folds", *folds},       {"z", cutoff},
                 {"n_max", *n_max},       {"max_deviation", deviation},
                 {"meta", make_meta(std::nullopt)}};
          return j.dump(2) + "\n";
        }
        return "J = " + std::to_string(*folds) + "  Z = " +
               std::to_string(cutoff) + "  n_max = " + std::to_string(*n_max) +
               "\nmax_deviation = " + format_real(deviation) + "\n";
      };
    });
  }

  // ---- avg ----
  {
    auto* cmd = add_cmd(
        "avg", "averaged maximal discrepancy over primes q <= Q");
    auto p_max = std::make_shared<double>(0);
    auto big_q = std::make_shared<double>(0);
    auto p_mode = std::make_shared<std::string>("fixed");
    auto strategy = std::make_shared<std::string>("full");
    auto samples = std::make_shared<u64>(0);
    auto seed = std::make_shared<u64>(0);
    cmd->add_option("--p-max", *p_max, "prime cutoff P");
    cmd->add_option("--big-q", *big_q, "modulus bound Q")->required();
    cmd->add_option("--p-mode", *p_mode, "fixed | modulus (P = q)")
        ->check(CLI::IsMember({"fixed", "modulus"}));
    cmd->add_option("--strategy", *strategy, "full | sample")
        ->check(CLI::IsMember({"full", "sample"}));
    cmd->add_option("--samples", *samples, "lambda draws for sample");
    cmd->add_option("--seed", *seed, "RNG seed for sample");
    cmd->callback([&runner, p_max, big_q, p_mode, strategy, samples, seed,
                   &threads, &output] {
      runner = [=, &threads, &output]() -> std::string {
        const double P = *p_max > 0 ? *p_max : *big_q;
        PrimeTable primes(
            std::max<u64>(2, static_cast<u64>(std::max(P, *big_q))));
        auto strat = make_strategy(*strategy, *samples, *seed);
        auto mode = *p_mode == "fixed" ? PMode::fixed : PMode::modulus;
        auto r = avg_max_discrepancy(P, *big_q, mode, strat, primes, threads);
        if (output.format == "json") {
          json rows = json::array();
          for (const auto& row : r.rows) rows.push_back(row);
          json j{{"p", P},
                 {"q", *big_q},
                 {"p_mode", *p_mode},
                 {"average", r.average},
                 {"bound", r.bound},
                 {"ratio", r.ratio},
                 {"q2_excluded", r.q2_excluded},
                 {"rows", std::move(rows)},
                 {"meta", make_meta(
                     strat.kind == LambdaStrategy::Kind::sample
                         ? std::optional<u64>(*seed)
                         : std::nullopt)}};
          return j.dump(2) + "\n";
        }
        if (output.format == "csv") return avg_csv(r);
        return "average = " + format_real(r.average) + "\nbound = " +
               format_real(r.bound) + "\nratio = " + format_real(r.ratio) +
               "\nrows = " + std::to_string(r.rows.size()) + "\n";
      };
    });
  }

  // ---- charavg ----
  {
    auto* cmd = add_cmd(
        "charavg", "averaged character-sum deviation over primes q <= Q");
    auto p_max = std::make_shared<double>(0);
    auto big_q = std::make_shared<double>(0);
    cmd->add_option("--p-max", *p_max, "prime cutoff P")->required();
    cmd->add_option("--big-q", *big_q, "modulus bound Q")->required();
    cmd->callback([&runner, p_max, big_q, &threads, &output] {
      runner = [=, &threads, &output]() -> std::string {
        PrimeTable primes(
            std::max<u64>(2, static_cast<u64>(std::max(*p_max, *big_q))));
        auto r = avg_char_deviation(*p_max, *big_q, primes, threads);
        if (output.format == "json") {
          json j = r;
          j["p"] = *p_max;
          j["q"] = *big_q;
          j["meta"] = make_meta(std::nullopt);
          return j.dump(2) + "\n";
        }
        return "avg_abs_dev = " + format_real(r.avg_abs_dev) +
               "\nsecond_moment = " + format_real(r.second_moment) +
               "\nratio_vs_sqrtP = " + format_real(r.ratio_first) +
               "\nratio_vs_PQ = " + format_real(r.ratio_second) + "\n";
      };
    });
  }

  // ---- spacings ----
  {
    auto* cmd = add_cmd(
        "spacings", "nearest-neighbour gaps of primes united with squares");
    auto q = std::make_shared<u64>(0);
    auto n_max = std::make_shared<u64>(0);
    auto bins = std::make_shared<unsigned>(20);
    cmd->add_option("--q", *q, "prime modulus")->required();
    cmd->add_option("--n-max", *n_max, "square count (default q / log q)");
    cmd->add_option("--bins", *bins, "histogram bins");
    cmd->callback([&runner, q, n_max, bins, &output] {
      runner = [=, &output]() -> std::string {
        Modulus mod(*q);
        const u64 squares = *n_max ? *n_max : default_spacing_n_max(*q);
        auto h = spacing_histogram(mod, squares, *bins);
        if (output.format == "json") {
          json j = h;
          j["q"] = *q;
          j["n_max"] = squares;
          j["meta"] = make_meta(std::nullopt);
          return j.dump(2) + "\n";
        }
        if (output.format == "csv") {
          std::string out = "bin_lo,bin_hi,count\n";
          for (std::size_t b = 0; b + 1 < h.edges.size(); ++b)
            out += format_real(h.edges[b]) + "," + format_real(h.edges[b + 1]) +
                   "," + std::to_string(h.counts[b]) + "\n";
          return out;
        }
        std::ostringstream plain;
        plain << "points = " << h.points << "  collisions = " << h.collisions
              << "\nmean_gap = " << format_real(h.mean_gap)
              << "\nsup_distance_to_exponential = "
              << format_real(h.sup_distance) << "\n";
        return plain.str();
      };
    });
  }

  // ---- sweep ----
  {
    auto* cmd = add_cmd(
        "sweep", "seeded grid of averaged experiments with cached results");
    auto config_path = std::make_shared<std::string>();
    auto q_grid = std::make_shared<std::string>();
    auto p_grid = std::make_shared<std::string>();
    auto p_mode = std::make_shared<std::string>();
    auto strategy = std::make_shared<std::string>();
    auto samples = std::make_shared<u64>(0);
    auto seed = std::make_shared<u64>(0);
    auto cache_dir = std::make_shared<std::string>();
    auto has_samples = std::make_shared<bool>(false);
    auto has_seed = std::make_shared<bool>(false);
    cmd->add_option("--config", *config_path, "flat key=value config file");
    cmd->add_option("--q-grid", *q_grid, "comma-separated Q values");
    cmd->add_option("--p-grid", *p_grid, "comma-separated P values");
    cmd->add_option("--p-mode", *p_mode, "fixed | modulus");
    cmd->add_option("--strategy", *strategy, "full | sample");
    cmd->add_option("--samples", *samples, "lambda draws for sample")
        ->trigger_on_parse()
        ->each([has_samples](const std::string&) { *has_samples = true; });
    cmd->add_option("--seed", *seed, "RNG seed")
        ->trigger_on_parse()
        ->each([has_seed](const std::string&) { *has_seed = true; });
    cmd->add_option("--cache-dir", *cache_dir,
                    "cache directory (SQRTLAB_CACHE_DIR overrides)");
    cmd->callback([&runner, config_path, q_grid, p_grid, p_mode, strategy,
                   samples, seed, cache_dir, has_samples, has_seed, &threads,
                   &output] {
      runner = [=, &threads, &output]() -> std::string {
        KeyValueConfig cfg;
        if (!config_path->empty())
          cfg = KeyValueConfig::parse_file(*config_path);
        // CLI flags override file values.
        if (!q_grid->empty()) cfg.set("q_grid", *q_grid);
        if (!p_grid->empty()) cfg.set("p_grid", *p_grid);
        if (!p_mode->empty()) cfg.set("p_mode", *p_mode);
        if (!strategy->empty()) cfg.set("strategy", *strategy);
        if (*has_samples) cfg.set("samples", std::to_string(*samples));
        if (*has_seed) cfg.set("seed", std::to_string(*seed));
        if (!cache_dir->empty()) cfg.set("cache_dir", *cache_dir);

        SweepConfig sweep;
        if (auto v = cfg.get("q_grid"))
          sweep.q_grid = parse_real_list(*v);
        else
          throw std::invalid_argument("sweep: q_grid is required");
        if (auto v = cfg.get("p_grid")) sweep.p_grid = parse_real_list(*v);
        if (auto v = cfg.get("p_mode")) {
          if (*v != "fixed" && *v != "modulus")
            throw std::invalid_argument("sweep: p_mode must be fixed|modulus");
          sweep.p_mode = *v == "fixed" ? PMode::fixed : PMode::modulus;
        }
        u64 cfg_samples = 0, cfg_seed = 0;
        if (auto v = cfg.get("samples")) cfg_samples = std::stoull(*v);
        if (auto v = cfg.get("seed")) cfg_seed = std::stoull(*v);
        sweep.strategy =
            make_strategy(cfg.get("strategy").value_or("full"), cfg_samples,
                          cfg_seed);
        sweep.seed = cfg_seed;
        sweep.threads = threads;
        if (auto v = cfg.get("threads"); v && threads == 0)
          sweep.threads = static_cast<unsigned>(std::stoul(*v));
        if (auto v = cfg.get("full_lambda_limit"))
          sweep.full_lambda_limit = std::stoull(*v);

        // Cache key: version + canonical parameters + seed. Output-side
        // settings do not participate.
        KeyValueConfig key_params = cfg;
        key_params.set("format", output.format);
        for (const char* k : {"cache_dir", "out", "threads"})
          if (key_params.contains(k)) key_params.set(k, "");
        const CacheKey key = make_cache_key(
            kVersion, "sweep", key_params.canonical(), cfg_seed);

        std::string cache_root = cache_dir->empty()
                                     ? cfg.get("cache_dir").value_or("")
                                     : *cache_dir;
        if (const char* env = std::getenv("SQRTLAB_CACHE_DIR"))
          cache_root = env;  // env var overrides the flag

        std::optional<ResultCache> cache;
        if (!cache_root.empty()) cache.emplace(cache_root);
        if (cache) {
          if (auto hit = cache->lookup(key, &std::cerr)) return *hit;
        }

        std::string payload;
        if (output.format == "json") {
          SweepResult result = run_sweep(sweep);
          json j = sweep_json(result);
          j["meta"] = make_meta(cfg_seed);
          payload = j.dump(2) + "\n";
        } else {
          payload = sweep_csv_header();
          SweepResult result = run_sweep(sweep, [&](const SweepCell& cell) {
            payload += sweep_csv_cell(cell);
          });
          if (result.fit) {
            payload += "# fit slope=" + format_real(result.fit->slope) +
                       " intercept=" + format_real(result.fit->intercept) +
                       " r_squared=" + format_real(result.fit->r_squared) +
                       " points=" + std::to_string(result.fit->points) + "\n";
          }
          payload += "# complete\n";
        }
        if (cache) cache->store(key, payload);
        return payload;
      };
    });
  }

  // ---- verify ----
  {
    auto* cmd = add_cmd("verify", "run the full property suite");
    cmd->callback([&runner, &threads] {
      runner = [&threads]() -> std::string {
        std::ostringstream out;
        const bool ok = run_selfcheck(out, threads);
        out << (ok ? "verify: all properties hold\n"
                   : "verify: FAILURES detected\n");
        if (!ok) throw std::runtime_error("verification failed:\n" + out.str());
        return out.str();
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    output.write(runner());
    return 0;
  } catch (const BudgetError& e) {
    std::cerr << "error: budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid parameter: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: runtime: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
