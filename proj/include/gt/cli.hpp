#pragma once

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "gt/json_io.hpp"
#include "gt/strategy_general.hpp"
#include "gt/strategy_two.hpp"
#include "gt/verify.hpp"

namespace gt {

namespace cli_detail {

/// Rounds through a fixed-precision decimal string so the JSON dump carries
/// no binary rounding tail (0.29289, not 0.29289000000000004).
inline double round_to(double x, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return std::strtod(buf, nullptr);
}

inline std::string fixed3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", x);
  return buf;
}

struct TableRow {
  std::uint64_t t;
  unsigned tests;
  unsigned info;
  double ratio;
};

inline TableRow make_row(std::uint64_t t, CapacityMode mode, const OptimizeOptions& opts) {
  OptimizationResult res = optimize_params(t, mode, opts);
  TableRow row;
  row.t = t;
  row.tests = res.total;
  row.info = info_bound(t, 2);
  row.ratio = static_cast<double>(res.total) / std::log2(static_cast<double>(t));
  return row;
}

inline void emit_table(const std::vector<TableRow>& rows, const std::string& format,
                       std::ostream& out) {
  if (format == "csv") {
    out << "t,tests,info_bound,ratio\n";
    for (const TableRow& r : rows)
      out << r.t << ',' << r.tests << ',' << r.info << ',' << fixed3(r.ratio) << '\n';
  } else if (format == "json") {
    OrderedJson j = OrderedJson::array();
    for (const TableRow& r : rows) {
      OrderedJson jr;
      jr["t"] = r.t;
      jr["tests"] = r.tests;
      jr["info_bound"] = r.info;
      jr["ratio"] = round_to(r.ratio, 3);
      j.push_back(std::move(jr));
    }
    out << j.dump() << '\n';
  } else {
    out << "t\ttests\tinfo_bound\tratio\n";
    for (const TableRow& r : rows)
      out << r.t << '\t' << r.tests << '\t' << r.info << '\t' << fixed3(r.ratio) << '\n';
  }
}

inline ConcatParams params_from_flag(const std::vector<unsigned>& raw) {
  if (raw.size() != 4)
    throw DomainError("--params expects q,layers,inner_len,inner_weight");
  ConcatParams p{raw[0], raw[1], raw[2], raw[3]};
  validate_params(p);
  return p;
}

inline void print_transcript(const Transcript& tr, const std::string& format, std::ostream& out) {
  if (format == "text") {
    out << "t=" << tr.t << " stages=" << tr.n_stages() << " tests=" << tr.total_tests()
        << " diagnosis=[";
    for (std::size_t i = 0; i < tr.diagnosis.size(); ++i)
      out << (i ? "," : "") << tr.diagnosis[i];
    out << "]\n";
  } else {
    out << transcript_to_json(tr).dump() << '\n';
  }
}

}  // namespace cli_detail

/// Command-line driver. Returns the process exit code: 0 on success, 1 on a
/// verification failure or an inconsistent oracle, 2 on usage errors.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;

  CLI::App app{"Multistage group-testing engine: code construction, adaptive "
               "search strategies, exhaustive verification and worst-case bounds"};
  app.require_subcommand(1);

  std::string format = "json";
  bool json_flag = false;

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format,-f", format, "Output format: json, csv or text")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    cmd->add_flag("--json", json_flag, "Shorthand for --format json");
  };

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Best code family for t items");
  std::uint64_t opt_t = 0;
  bool exact_power = false;
  unsigned max_inner_len = 16;
  optimize->add_option("--t", opt_t, "Number of items")->required()->check(CLI::Range(std::uint64_t{2}, std::numeric_limits<std::uint64_t>::max()));
  optimize->add_flag("--exact-power", exact_power, "Require q^layers == t");
  optimize->add_option("--max-inner-len", max_inner_len, "Inner code length cap")
      ->capture_default_str();
  add_format(optimize);

  // table
  auto* table = app.add_subcommand("table", "Worst-case totals for a list of t values");
  std::vector<std::uint64_t> table_ts;
  table->add_option("--t", table_ts, "Comma-separated t values")->required()->delimiter(',');
  table->add_flag("--exact-power", exact_power, "Require q^layers == t");
  table->add_option("--max-inner-len", max_inner_len, "Inner code length cap")
      ->capture_default_str();
  add_format(table);

  // verify
  auto* verify = app.add_subcommand("verify", "Exhaustively check a strategy on all defect sets");
  std::uint64_t ver_t = 0;
  unsigned ver_s = 2;
  unsigned jobs = 1;
  std::uint64_t budget = 5'000'000;
  unsigned q_hint = 3;
  std::string strategy = "auto";
  std::vector<unsigned> params_flag;
  verify->add_option("--t", ver_t, "Number of items")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 31));
  verify->add_option("--s", ver_s, "Maximum number of defects")->capture_default_str();
  verify->add_option("--jobs", jobs, "Parallel workers")->capture_default_str();
  verify->add_option("--budget", budget, "Maximum number of cases")->capture_default_str();
  verify->add_option("--strategy", strategy, "two, general or auto")
      ->check(CLI::IsMember({"two", "general", "auto"}))
      ->capture_default_str();
  verify->add_option("--params", params_flag, "q,layers,inner_len,inner_weight")->delimiter(',');
  verify->add_option("--q-hint", q_hint, "Alphabet for the general strategy")
      ->capture_default_str();
  add_format(verify);

  // run
  auto* run = app.add_subcommand("run", "One run of the four-stage two-defect strategy");
  std::uint64_t run_t = 0;
  std::vector<Item> defects;
  run->add_option("--t", run_t, "Number of items")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 31));
  run->add_option("--defects", defects, "Comma-separated defect indices")->delimiter(',');
  run->add_option("--params", params_flag, "q,layers,inner_len,inner_weight")->delimiter(',');
  add_format(run);

  // general
  auto* general = app.add_subcommand("general", "One run of the recursive splitting strategy");
  general->add_option("--t", run_t, "Number of items")->required()->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 31));
  general->add_option("--s", ver_s, "Maximum number of defects")->capture_default_str();
  general->add_option("--defects", defects, "Comma-separated defect indices")->delimiter(',');
  general->add_option("--q-hint", q_hint, "Alphabet for group codes")->capture_default_str();
  add_format(general);

  // rate
  auto* rate = app.add_subcommand("rate", "Asymptotic rate optimum of the four-stage search");
  double grid_step = 1e-3;
  double tol = 1e-9;
  rate->add_option("--grid-step", grid_step, "Grid step for the scan")->capture_default_str();
  rate->add_option("--tol", tol, "Refinement tolerance")->capture_default_str();
  add_format(rate);

  // info-bound
  auto* info = app.add_subcommand("info-bound", "Information lower bound on tests");
  info->add_option("--t", ver_t, "Number of items")->required()->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
  info->add_option("--s", ver_s, "Maximum number of defects")->capture_default_str();
  add_format(info);

  std::vector<const char*> argv;
  argv.push_back("gt");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 2;
  }
  if (json_flag) format = "json";

  const CapacityMode mode = exact_power ? CapacityMode::ExactPower : CapacityMode::AtMost;
  const OptimizeOptions opt_opts{max_inner_len};

  try {
    if (*optimize) {
      OptimizationResult res = optimize_params(opt_t, mode, opt_opts);
      if (format == "json") {
        OrderedJson j;
        j["t"] = opt_t;
        j["total"] = res.total;
        j["params"] = params_to_json(res.params);
        j["info_bound"] = info_bound(opt_t, 2);
        out << j.dump() << '\n';
      } else if (format == "csv") {
        emit_table({make_row(opt_t, mode, opt_opts)}, format, out);
      } else {
        out << "t=" << opt_t << " total=" << res.total << " stage1=" << res.breakdown.stage1
            << " extra=" << res.breakdown.worst_extra << " info_bound=" << info_bound(opt_t, 2)
            << "\nparams: q=" << res.params.q << " layers=" << res.params.layers
            << " inner_len=" << res.params.inner_len
            << " inner_weight=" << res.params.inner_weight << "\nworst profile:";
        for (unsigned wl : res.breakdown.worst_profile) out << ' ' << wl;
        out << '\n';
      }
      return 0;
    }

    if (*table) {
      std::vector<TableRow> rows;
      for (std::uint64_t t : table_ts) rows.push_back(make_row(t, mode, opt_opts));
      emit_table(rows, format, out);
      return 0;
    }

    if (*verify) {
      const std::uint32_t t = static_cast<std::uint32_t>(ver_t);
      if (strategy == "auto") strategy = ver_s <= 2 ? "two" : "general";
      VerificationReport report;
      VerifyOptions vopts{jobs, budget};
      if (strategy == "two") {
        if (ver_s > 2) throw DomainError("verify: the two-defect strategy needs --s <= 2");
        ConcatParams params = params_flag.empty()
                                  ? optimize_params(t, CapacityMode::AtMost, opt_opts).params
                                  : params_from_flag(params_flag);
        report = verify_exhaustive(
            t, ver_s, [&](const Oracle& oracle) { return run_two(oracle, params); }, vopts);
      } else {
        GeneralOptions gopts{q_hint};
        report = verify_exhaustive(
            t, ver_s, [&](const Oracle& oracle) { return run_general(oracle, ver_s, gopts); },
            vopts);
      }
      if (format == "text") {
        out << "t=" << report.t << " s=" << report.s << " cases=" << report.cases
            << " failures=" << report.failures.size() << " max_tests=" << report.max_tests
            << " max_stages=" << report.max_stages << '\n';
      } else {
        out << report_to_json(report).dump() << '\n';
      }
      return report.ok() ? 0 : 1;
    }

    if (*run) {
      const std::uint32_t t = static_cast<std::uint32_t>(run_t);
      ConcatParams params = params_flag.empty()
                                ? optimize_params(t, CapacityMode::AtMost, opt_opts).params
                                : params_from_flag(params_flag);
      Oracle oracle(defects, t);
      Transcript tr = run_two(oracle, params);
      print_transcript(tr, format, out);
      return tr.diagnosis == oracle.defects() ? 0 : 1;
    }

    if (*general) {
      const std::uint32_t t = static_cast<std::uint32_t>(run_t);
      Oracle oracle(defects, t);
      Transcript tr = run_general(oracle, ver_s, GeneralOptions{q_hint});
      print_transcript(tr, format, out);
      return tr.diagnosis == oracle.defects() ? 0 : 1;
    }

    if (*rate) {
      RatePoint pt = optimize_rate(grid_step, tol);
      if (format == "text") {
        out << "w=" << round_to(pt.w, 5) << " w_prime=" << round_to(pt.w_prime, 5)
            << " value=" << fixed3(pt.value) << '\n';
      } else {
        OrderedJson j;
        j["w"] = round_to(pt.w, 5);
        j["w_prime"] = round_to(pt.w_prime, 5);
        j["value"] = round_to(pt.value, 3);
        out << j.dump() << '\n';
      }
      return 0;
    }

    if (*info) {
      const unsigned bound = info_bound(ver_t, ver_s);
      if (format == "text") {
        out << "t=" << ver_t << " s=" << ver_s << " info_bound=" << bound << '\n';
      } else {
        OrderedJson j;
        j["t"] = ver_t;
        j["s"] = ver_s;
        j["info_bound"] = bound;
        out << j.dump() << '\n';
      }
      return 0;
    }
  } catch (const InconsistentOutcomeError& e) {
    err << "inconsistent oracle: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace gt
