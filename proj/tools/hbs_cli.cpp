// Copyright 2026 The HBS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// hbs: experiments driver. Every subcommand writes CSV (--csv or --out) or an
// aligned table, followed by a short summary.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "experiments.hpp"
#include "hbs/errors.hpp"

namespace ex = hbs::experiments;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitCheck = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Accepts plain numbers and powers written as "2^15".
double parse_number(const std::string& text) {
  const auto caret = text.find('^');
  try {
    std::size_t used = 0;
    if (caret == std::string::npos) {
      const double v = std::stod(text, &used);
      if (used != text.size()) throw UsageError("bad number: " + text);
      return v;
    }
    const std::string base_text = text.substr(0, caret);
    const std::string exp_text = text.substr(caret + 1);
    const double base = std::stod(base_text, &used);
    if (used != base_text.size()) throw UsageError("bad number: " + text);
    const double exponent = std::stod(exp_text, &used);
    if (used != exp_text.size()) throw UsageError("bad number: " + text);
    return std::pow(base, exponent);
  } catch (const std::logic_error&) {
    throw UsageError("bad number: " + text);
  }
}

std::vector<double> parse_reals(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& s : items) out.push_back(parse_number(s));
  return out;
}

std::uint64_t to_count(double v, const char* what) {
  if (!(v >= 0) || v > 1.8e19 || v != std::floor(v)) throw UsageError(std::string(what) + " must be a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> parse_counts(const std::vector<std::string>& items, const char* what) {
  std::vector<std::uint64_t> out;
  for (const auto& s : items) out.push_back(to_count(parse_number(s), what));
  return out;
}

std::vector<std::uint32_t> parse_registers(const std::vector<std::string>& items) {
  std::vector<std::uint32_t> out;
  for (const auto& s : items) {
    const std::uint64_t v = to_count(parse_number(s), "B");
    if (v == 0 || v > 65536) throw UsageError("B must be in [1, 65536]");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

struct Common {
  std::uint64_t seed = 1;
  std::uint64_t reps = 10'000;
  std::string out;
  bool csv = false;
  bool check = false;
};

class Report {
 public:
  explicit Report(const Common& c) : common_(c) {}

  void emit(const ex::Csv& table) {
    if (!common_.out.empty()) {
      std::ofstream f(common_.out, std::ios::binary | (first_ ? std::ios::trunc : std::ios::app));
      if (!f) throw UsageError("cannot open " + common_.out);
      if (!first_) f << '\n';
      table.write(f);
    } else if (common_.csv) {
      if (!first_) std::cout << '\n';
      table.write(std::cout);
    } else {
      if (!first_) std::cout << '\n';
      table.write_table(std::cout);
    }
    first_ = false;
  }

  // Summary lines stay off stdout when stdout carries CSV.
  std::ostream& summary() { return common_.csv && common_.out.empty() ? std::cerr : std::cout; }

  void expect(bool ok, const std::string& what) {
    if (!common_.check) return;
    if (!ok) {
      std::cerr << "check failed: " << what << '\n';
      failed_ = true;
    }
  }

  [[nodiscard]] int status() const { return failed_ ? kExitCheck : 0; }

 private:
  const Common& common_;
  bool first_ = true;
  bool failed_ = false;
};

void add_common(CLI::App* sub, Common& c, bool with_reps) {
  sub->add_option("--seed", c.seed, "RNG seed");
  if (with_reps) sub->add_option("--reps", c.reps, "repetitions");
  sub->add_option("--out", c.out, "write CSV to this path");
  sub->add_flag("--csv", c.csv, "write CSV to stdout");
  sub->add_flag("--check", c.check, "turn property reports into assertions (exit 2 on failure)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Huffman-bucket sketch experiments"};
  app.require_subcommand(1);
  Common common;
  std::function<int()> run;

  // dist
  std::vector<std::string> dist_lambdas{"0", "1", "2^5", "2^10", "2^15", "2^20"};
  auto* dist = app.add_subcommand("dist", "rank distribution per lambda");
  add_common(dist, common, false);
  dist->add_option("--lambda", dist_lambdas, "load factors")->delimiter(',');
  dist->callback([&] {
    run = [&] {
      Report report(common);
      const auto rows = ex::dist(parse_reals(dist_lambdas));
      report.emit(ex::dist_csv(rows));
      std::size_t i = 0;
      while (i < rows.size()) {
        double sum = 0;
        const double lambda = rows[i].lambda;
        for (; i < rows.size() && rows[i].lambda == lambda; ++i) sum += rows[i].probability;
        report.summary() << "lambda=" << ex::format_number(lambda) << " mass=" << ex::format_number(sum) << '\n';
        report.expect(std::abs(sum - 1.0) <= 1e-12, "pmf mass at lambda=" + ex::format_number(lambda));
      }
      return report.status();
    };
  });

  // bucket-size
  std::string bs_n = "2^30";
  std::string bs_m = "2^15";
  std::vector<std::string> bs_b;
  for (int b = 10; b <= 320; b += 10) bs_b.push_back(std::to_string(b));
  auto* bsize = app.add_subcommand("bucket-size", "codeword bits per bucket versus B at lambda = n/m");
  add_common(bsize, common, true);
  bsize->add_option("--n", bs_n, "stream cardinality");
  bsize->add_option("--m", bs_m, "register count");
  bsize->add_option("--b", bs_b, "registers per bucket")->delimiter(',');
  bsize->callback([&] {
    run = [&] {
      Report report(common);
      const auto registers = parse_registers(bs_b);
      const auto rows = ex::bucket_size(parse_number(bs_n), parse_number(bs_m), registers, {common.seed, common.reps});
      report.emit(ex::bucket_size_csv(rows));
      if (rows.size() >= 2) {
        std::vector<double> xs, ys;
        for (const auto& r : rows) {
          xs.push_back(r.registers);
          ys.push_back(r.mean_bits);
        }
        const auto fit = ex::fit_linear(xs, ys);
        report.summary() << "fit: mean_bits = " << ex::format_number(fit.slope) << " * B + "
                         << ex::format_number(fit.intercept) << ", r2=" << ex::format_number(fit.r_squared)
                         << ", max_rel_residual=" << ex::format_number(fit.max_relative_residual) << '\n';
        report.expect(fit.max_relative_residual <= 0.10, "mean bits not linear in B within 10%");
      }
      for (const auto& r : rows) {
        const std::uint64_t budget = r.registers == 10 ? 64 : r.registers == 144 ? 512 : r.registers == 313 ? 1024 : 0;
        if (budget != 0) {
          report.summary() << "B=" << r.registers << " max_bits=" << r.max_bits << " budget=" << budget << '\n';
          report.expect(r.max_bits <= budget, "B=" + std::to_string(r.registers) + " exceeds its budget");
        }
      }
      return report.status();
    };
  });

  // bucket-size-vs-lambda
  std::vector<std::string> bl_b{"10", "144", "313"};
  std::vector<std::string> bl_lambda{"2^-2", "2^-1", "1", "2^1", "2^2", "2^4", "2^6", "2^8", "2^12", "2^16", "2^20"};
  auto* blambda = app.add_subcommand("bucket-size-vs-lambda", "codeword bits per bucket versus lambda");
  add_common(blambda, common, true);
  blambda->add_option("--b", bl_b, "registers per bucket")->delimiter(',');
  blambda->add_option("--lambda", bl_lambda, "load factors")->delimiter(',');
  blambda->callback([&] {
    run = [&] {
      Report report(common);
      const auto registers = parse_registers(bl_b);
      const auto rows = ex::bucket_size_vs_lambda(registers, parse_reals(bl_lambda), {common.seed, common.reps});
      report.emit(ex::bucket_size_csv(rows));
      const double variation = ex::plateau_variation(rows, 256.0);
      report.summary() << "plateau variation (lambda >= 2^8): " << ex::format_number(variation) << '\n';
      report.expect(variation < 0.05, "plateau varies by 5% or more");
      for (const auto& small : rows) {
        if (small.lambda >= 2) continue;
        for (const auto& big : rows) {
          if (big.registers == small.registers && big.lambda >= 256) {
            report.expect(small.mean_bits < big.mean_bits, "small-lambda bucket not below plateau");
          }
        }
      }
      return report.status();
    };
  });

  // mvp
  std::uint64_t mvp_m = 32768;
  std::vector<std::string> mvp_budget{"64", "512", "1024"};
  std::vector<std::string> mvp_b{"10", "144", "313"};
  auto* mvp = app.add_subcommand("mvp", "sketch size and memory-variance product for fixed bucket budgets");
  add_common(mvp, common, false);
  mvp->add_option("--m", mvp_m, "register count");
  mvp->add_option("--budget", mvp_budget, "codeword bit budget per bucket")->delimiter(',');
  mvp->add_option("--b", mvp_b, "registers per bucket, paired with --budget")->delimiter(',');
  mvp->callback([&] {
    run = [&] {
      Report report(common);
      const auto budgets = parse_counts(mvp_budget, "budget");
      const auto registers = parse_registers(mvp_b);
      if (budgets.size() != registers.size()) throw UsageError("--budget and --b need the same length");
      std::vector<ex::MvpRow> rows;
      for (std::size_t i = 0; i < budgets.size(); ++i) {
        if (budgets[i] > UINT32_MAX) throw UsageError("budget too large");
        rows.push_back(ex::mvp_row(mvp_m, static_cast<std::uint32_t>(budgets[i]), registers[i]));
      }
      report.emit(ex::mvp_csv(rows));
      auto close = [](double a, double b) { return std::abs(a - b) <= 0.02 * b; };
      for (const auto& r : rows) {
        if (!r.reference) continue;
        const std::string tag = "budget=" + std::to_string(r.budget) + " B=" + std::to_string(r.registers);
        report.expect(close(r.small_bits, r.reference->small_bits), tag + " small size off by more than 2%");
        report.expect(close(r.big_bits, r.reference->big_bits), tag + " big size off by more than 2%");
        report.expect(close(r.mvp_small, r.reference->mvp_small), tag + " small MVP off by more than 2%");
      }
      return report.status();
    };
  });

  // tree-changes
  std::uint64_t tc_m = 1024;
  std::string tc_n = "1e6";
  double tc_max_c = 0;
  auto* trees = app.add_subcommand("tree-changes", "codebook changes while lambda = n/m sweeps n = 1..N");
  add_common(trees, common, false);
  trees->add_option("--m", tc_m, "register count");
  trees->add_option("--n", tc_n, "largest n");
  trees->add_option("--max-c", tc_max_c, "with --check, fail if total > c * log2(N)");
  trees->callback([&] {
    run = [&] {
      Report report(common);
      if (tc_m == 0) throw UsageError("m must be positive");
      const auto result = ex::tree_changes(tc_m, to_count(parse_number(tc_n), "n"));
      report.emit(ex::tree_changes_csv(result));
      report.emit(ex::tree_octaves_csv(result));
      report.summary() << "total_changes=" << result.total() << " c=" << ex::format_number(result.constant())
                       << " max_per_octave=" << result.max_per_octave() << '\n';
      if (tc_max_c > 0) report.expect(result.constant() <= tc_max_c, "tree changes exceed c * log2(N)");
      return report.status();
    };
  });

  // update-costs
  std::uint64_t uc_m = 4096;
  std::uint32_t uc_b = 64;
  std::string uc_n = "1e6";
  auto* costs = app.add_subcommand("update-costs", "operation counters at power-of-two checkpoints");
  add_common(costs, common, false);
  costs->add_option("--m", uc_m, "register count");
  costs->add_option("--b", uc_b, "registers per bucket");
  costs->add_option("--n", uc_n, "stream length");
  costs->callback([&] {
    run = [&] {
      Report report(common);
      const auto params = hbs::SketchParams::make(uc_m, uc_b);
      const std::uint64_t n = to_count(parse_number(uc_n), "n");
      const auto rows = ex::update_costs(params, n, common.seed);
      report.emit(ex::update_costs_csv(rows));
      if (rows.empty()) return report.status();
      const auto& last = rows.back();
      const double m_eff = static_cast<double>(params.register_count());
      const double rebuild_bound = n >= 1 ? 2 * std::log2(static_cast<double>(n)) + 4 : 4;
      report.summary() << "rebuilds=" << last.rebuilds << " bound=" << ex::format_number(rebuild_bound)
                       << " min_recomputes=" << last.min_recomputes << '\n';
      report.expect(last.rebuilds <= rebuild_bound, "rebuilds exceed 2 log2 N + 4");
      report.expect(static_cast<double>(last.min_recomputes) <= m_eff * 64, "min recomputes exceed 64 m");
      double previous = -1;
      for (const auto& r : rows) {
        if (static_cast<double>(r.n) < 64 * m_eff) continue;
        const double per = static_cast<double>(r.ordinary_updates) / static_cast<double>(r.n);
        if (previous >= 0) report.expect(per < previous, "ordinary updates per element not decreasing");
        previous = per;
      }
      return report.status();
    };
  });

  // accuracy
  std::vector<std::string> acc_n{"0", "1000", "10000", "100000", "1000000"};
  std::uint64_t acc_m = 4096;
  std::uint32_t acc_b = 64;
  std::uint64_t acc_trials = 200;
  auto* acc = app.add_subcommand("accuracy", "estimator error and oracle agreement over random streams");
  add_common(acc, common, false);
  acc->add_option("--n", acc_n, "stream lengths")->delimiter(',');
  acc->add_option("--m", acc_m, "register count");
  acc->add_option("--b", acc_b, "registers per bucket");
  acc->add_option("--trials,--reps", acc_trials, "trials per n");
  acc->callback([&] {
    run = [&] {
      Report report(common);
      const auto params = hbs::SketchParams::make(acc_m, acc_b);
      const auto rows = ex::accuracy(params, parse_counts(acc_n, "n"), acc_trials, common.seed);
      report.emit(ex::accuracy_csv(rows));
      const double m_eff = static_cast<double>(params.register_count());
      const double bound = 1.3 * 1.04 / std::sqrt(m_eff);
      for (const auto& r : rows) {
        report.expect(r.oracle_mismatches == 0, "HBS disagrees with the HLL oracle at n=" + std::to_string(r.n));
        if (r.n == 0) report.expect(r.relative_standard_error == 0, "nonzero estimate for the empty stream");
        if (static_cast<double>(r.n) >= 64 * m_eff) {
          report.expect(r.relative_standard_error <= bound,
                        "relative standard error above 1.3 * 1.04 / sqrt(m) at n=" + std::to_string(r.n));
        }
      }
      report.summary() << "error bound for n >= 64m: " << ex::format_number(bound) << '\n';
      return report.status();
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return run();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const hbs::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const hbs::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheck;
  }
}
