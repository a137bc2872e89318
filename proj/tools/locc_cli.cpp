// Copyright 2026 The locc-toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Every subcommand prints a human-readable report
// and exits 0 exactly when all of its embedded assertions pass; CSV output
// uses 17 significant digits so tables reproduce bit for bit.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "locc/choi.hpp"
#include "locc/classify.hpp"
#include "locc/demo.hpp"
#include "locc/instrument.hpp"
#include "locc/io.hpp"
#include "locc/kraus.hpp"
#include "locc/matrix.hpp"
#include "locc/protocol.hpp"
#include "locc/reduction.hpp"
#include "locc/wclass.hpp"

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
  std::printf("%s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(double v) { return locc::format_full(v); }

const char* verdict_name(locc::Verdict v) {
  switch (v) {
    case locc::Verdict::yes: return "yes";
    case locc::Verdict::no: return "no";
    default: return "unknown";
  }
}

std::string cut_name(const std::vector<std::size_t>& cut) {
  if (cut.empty()) return "-";
  std::string s = "{";
  for (std::size_t i = 0; i < cut.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(cut[i]);
  }
  return s + "}";
}

// ---------------------------------------------------------------------------

void run_converge(std::size_t nu_max, double c, const std::string& out) {
  std::vector<std::size_t> ladder;
  for (std::size_t nu = 10; nu <= nu_max; nu *= 10) ladder.push_back(nu);
  if (ladder.empty())
    throw std::invalid_argument("converge: --nu-max must be at least 10");

  const std::vector<locc::ConvergenceRow> rows =
      locc::convergence_table(ladder, c);

  std::printf("%8s  %-22s  %-22s  %-22s\n", "nu", "eps", "distance",
              "stop_trace");
  for (const locc::ConvergenceRow& r : rows)
    std::printf("%8zu  %-22s  %-22s  %-22s\n", r.nu, fmt(r.eps).c_str(),
                fmt(r.distance).c_str(), fmt(r.stop_trace).c_str());

  bool decreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    decreasing = decreasing && rows[i].distance < rows[i - 1].distance;
  check(decreasing, "distance strictly decreasing along the ladder");

  bool traces_match = true;
  bool bounded_below = true;
  for (const locc::ConvergenceRow& r : rows) {
    const double q = 1.0 - r.eps;
    const double closed = r.eps * r.eps *
                          (1.0 - std::pow(q, 2.0 * double(r.nu))) /
                          (1.0 - q * q);
    traces_match =
        traces_match && std::abs(r.stop_trace - closed) <= 1e-12;
    bounded_below =
        bounded_below && r.distance >= r.stop_trace && r.stop_trace > 0.0;
  }
  check(traces_match, "stopping-branch trace matches the closed form");
  check(bounded_below, "distance dominates the stopping-branch trace");
  if (nu_max >= 10000)
    check(rows.back().distance < 0.1, "distance below 0.1 at nu = 10^4");

  if (!out.empty()) {
    std::vector<std::vector<std::string>> cells;
    for (const locc::ConvergenceRow& r : rows)
      cells.push_back({std::to_string(r.nu), fmt(r.eps), fmt(r.distance),
                       fmt(r.stop_trace)});
    locc::write_text_file(
        out, locc::to_csv({"nu", "eps", "distance", "stop_trace"}, cells));
    std::printf("wrote %s\n", out.c_str());
  }
}

void run_gap() {
  const locc::WTransformReport w = locc::w_transform_check();
  std::printf("W transformation under the splitter instrument:\n");
  std::printf("  p(00) p(01) p(10)    = %s  %s  %s\n",
              fmt(w.probability_00).c_str(), fmt(w.probability_01).c_str(),
              fmt(w.probability_10).c_str());
  std::printf("  max state deviation  = %s\n",
              fmt(w.max_state_deviation).c_str());
  std::printf("  pair concurrence     = %s\n",
              fmt(w.omega_concurrence).c_str());
  std::printf("  tripartite monotone  = %s\n", fmt(w.w_monotone).c_str());
  std::printf("  invariance slack     = %s\n",
              fmt(w.invariance_slack).c_str());
  check(w.passed, "splitter transformation reproduces the predicted branches");

  const locc::SepGapReport g = locc::sep_gap_check();
  std::printf("separable projector instrument on the same state:\n");
  std::printf("  tp deviation         = %s\n", fmt(g.tp_deviation).c_str());
  std::printf("  branch probabilities = %s  %s  %s\n",
              fmt(g.probability_1).c_str(), fmt(g.probability_2).c_str(),
              fmt(g.probability_3).c_str());
  std::printf("  average concurrence  = %s\n",
              fmt(g.average_concurrence).c_str());
  std::printf("  monotone ceiling     = %s\n", fmt(g.ceiling).c_str());
  std::printf("  excess               = %s\n", fmt(g.excess).c_str());
  check(g.passed, "separable instrument exceeds the monotone ceiling");
}

void run_impossibility(std::size_t samples, std::uint64_t seed) {
  const locc::ImpossibilityReport r =
      locc::impossibility_certificate(samples, seed);
  std::printf("impossibility certificate (%zu samples, seed %llu):\n",
              r.samples, static_cast<unsigned long long>(seed));
  std::printf("  invariance slack    = %s\n", fmt(r.invariance_slack).c_str());
  std::printf("  trivial measurement = %s\n",
              fmt(r.trivial_magnitude).c_str());
  std::printf("  spot check          = %s\n", fmt(r.spot_check).c_str());
  std::printf("  %-22s  %-22s  %s\n", "delta", "eta", "count");
  for (const locc::EtaPoint& p : r.eta_by_delta)
    std::printf("  %-22s  %-22s  %zu\n", fmt(p.delta).c_str(),
                fmt(p.eta).c_str(), p.count);
  check(r.passed, "every strength bucket certifies a strict decrease");
}

void run_classify(const std::string& path, double tol) {
  const locc::Instrument instr =
      locc::instrument_from_json(locc::read_json_file(path));
  const locc::ValidationReport vr = locc::validate_instrument(instr);
  std::printf("%s: %zu outcomes, tp deviation %s\n", path.c_str(),
              instr.size(), fmt(vr.tp_deviation).c_str());
  check(vr.valid, "instrument is a valid trace-preserving family");

  const locc::ClassificationReport report =
      locc::classify_instrument(instr, tol);
  std::printf("%-10s  %-8s  %-8s  %-22s  %s\n", "label", "sep", "ppt",
              "min PT eigenvalue", "worst cut");
  for (const locc::MapClassification& mc : report.maps) {
    std::printf("%-10s  %-8s  %-8s  %-22s  %s\n", mc.label.c_str(),
                verdict_name(mc.sep_finegrained), verdict_name(mc.ppt),
                fmt(mc.min_pt_eigenvalue).c_str(),
                cut_name(mc.worst_cut).c_str());
    if (!mc.schmidt_coeffs.empty()) {
      std::printf("            witness Schmidt coefficients:");
      for (double s : mc.schmidt_coeffs) std::printf(" %s", fmt(s).c_str());
      std::printf("\n");
    }
  }
  std::printf("aggregate: sep %s, ppt %s\n",
              verdict_name(report.sep_finegrained),
              verdict_name(report.ppt));
}

void run_reduce(const std::string& path, const std::string& out) {
  const locc::ProtocolTree tree =
      locc::protocol_from_json(locc::read_json_file(path));
  locc::validate_tree(tree);
  const locc::Instrument before = locc::run_protocol(tree);
  const std::size_t m = before.size();

  const locc::ProtocolTree reduced =
      locc::compress_outcomes(locc::normalize_protocol(tree), m);
  const locc::Instrument after = locc::run_protocol(reduced);

  auto print_counts = [](const char* tag, const locc::ProtocolTree& t) {
    std::printf("%s depth %zu, branches per level:", tag,
                locc::tree_depth(t));
    for (std::size_t n : locc::level_branch_counts(t))
      std::printf(" %zu", n);
    std::printf("\n");
  };
  print_counts("input  ", tree);
  print_counts("reduced", reduced);

  const double dist = locc::instrument_choi_distance(before, after);
  std::printf("induced-instrument distance = %s\n", fmt(dist).c_str());
  check(dist <= 1e-8, "reduction preserves the induced instrument");
  check(locc::outcome_bound_satisfied(reduced, m),
        "branch counts satisfy the outcome bound");

  if (!out.empty()) {
    locc::write_json_file(out, locc::protocol_to_json(reduced));
    std::printf("wrote %s\n", out.c_str());
  }
}

void run_run(const std::string& proto_path, const std::string& state_path,
             const std::string& out) {
  const locc::ProtocolTree tree =
      locc::protocol_from_json(locc::read_json_file(proto_path));
  locc::validate_tree(tree);
  const locc::StateRecord st =
      locc::state_from_json(locc::read_json_file(state_path));

  const locc::Instrument instr = locc::run_protocol(tree);
  const std::vector<locc::OutcomeSample> samples =
      locc::apply_instrument(instr, st.matrix);

  std::printf("%-12s  %s\n", "label", "probability");
  double total = 0.0;
  for (const locc::OutcomeSample& s : samples) {
    std::printf("%-12s  %s\n", s.label.c_str(), fmt(s.probability).c_str());
    total += s.probability;
  }
  std::printf("%-12s  %s\n", "total", fmt(total).c_str());
  check(std::abs(total - 1.0) <= 1e-9, "outcome probabilities sum to one");

  if (!out.empty()) {
    locc::json j;
    j["labels"] = locc::json::array();
    j["probabilities"] = locc::json::array();
    j["states"] = locc::json::array();
    for (const locc::OutcomeSample& s : samples) {
      j["labels"].push_back(s.label);
      j["probabilities"].push_back(s.probability);
      j["states"].push_back(s.state ? locc::matrix_to_json(*s.state)
                                    : locc::json());
    }
    locc::write_json_file(out, j);
    std::printf("wrote %s\n", out.c_str());
  }
}

void run_monotone(std::size_t samples, std::uint64_t seed, int party,
                  std::size_t star, const std::string& report) {
  struct Row {
    double delta_c = 0.0;
    locc::WClassVector x;
    std::size_t party = 0;
    double a1 = 0.0;
    double c1 = 0.0;
    locc::complex b1;
    double strength = 0.0;
  };

  std::mt19937_64 rng = locc::suite_rng(seed, 0);
  std::vector<Row> rows;
  rows.reserve(samples);
  double worst = -1.0;
  double worst_strict = -1.0;
  std::size_t strict_count = 0;
  double prob_slack = 0.0;

  for (std::size_t i = 0; i < samples; ++i) {
    const locc::WClassVector x = locc::sample_canonical_x(rng);
    const std::size_t p =
        party < 0 ? rng() % 3 : static_cast<std::size_t>(party);
    // Main suite keeps b = 0; every fourth draw exercises a complex b.
    const locc::BinaryMeasurement m =
        locc::sample_measurement(rng, p, i % 4 == 3);

    double total = 0.0;
    for (const locc::MeasurementOutcome& o :
         locc::apply_binary_measurement(x, m))
      total += o.probability;
    prob_slack = std::max(prob_slack, std::abs(total - 1.0));

    Row row;
    row.delta_c = locc::avg_delta_C(x, star, m);
    row.x = x;
    row.party = p;
    row.a1 = m.a[0];
    row.c1 = m.c[0];
    row.b1 = m.b[0];
    row.strength = std::abs(m.a[0] - m.c[0]) + std::abs(m.b[0]);
    rows.push_back(row);

    worst = std::max(worst, row.delta_c);

    // The strict-decrease guarantee covers the pivot and its strongest
    // partner; identify the latter from the pre-measurement vector.
    std::size_t n1 = star == 0 ? 1 : 0;
    for (std::size_t k = 0; k < 3; ++k)
      if (k != star && x.component(k) > x.component(n1)) n1 = k;
    if ((p == star || p == n1) && row.strength >= 0.05) {
      ++strict_count;
      worst_strict = std::max(worst_strict, row.delta_c);
    }
  }

  std::printf("monotone suite: %zu samples, seed %llu, star %zu\n", samples,
              static_cast<unsigned long long>(seed), star);
  std::printf("  max avg change            = %s\n", fmt(worst).c_str());
  std::printf("  max probability slack     = %s\n", fmt(prob_slack).c_str());
  std::printf("  strict-decrease samples   = %zu\n", strict_count);
  std::printf("  worst strict-bucket value = %s\n",
              fmt(worst_strict).c_str());

  check(worst <= 1e-9, "average change never exceeds 1e-9");
  check(prob_slack <= 1e-12, "branch probabilities sum to one");
  check(strict_count > 0, "strict-decrease bucket is populated");
  check(worst_strict <= -1e-6,
        "strong measurements on the pivot pair decrease the monotone");

  if (!report.empty()) {
    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return a.delta_c > b.delta_c; });
    const std::size_t keep = std::min<std::size_t>(100, rows.size());
    std::vector<std::vector<std::string>> cells;
    for (std::size_t i = 0; i < keep; ++i) {
      const Row& r = rows[i];
      cells.push_back({std::to_string(i + 1), fmt(r.delta_c), fmt(r.x.xa),
                       fmt(r.x.xb), fmt(r.x.xc), std::to_string(r.party),
                       std::to_string(star), fmt(r.a1), fmt(r.c1),
                       fmt(r.b1.real()), fmt(r.b1.imag()),
                       fmt(r.strength)});
    }
    locc::write_text_file(
        report,
        locc::to_csv({"rank", "avg_delta_c", "xa", "xb", "xc", "party",
                      "star", "a1", "c1", "b1_re", "b1_im", "strength"},
                     cells));
    std::printf("wrote %s\n", report.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LOCC instrument toolkit"};
  app.require_subcommand(1);

  CLI::App* demo = app.add_subcommand(
      "demo", "end-to-end demonstrations of the headline results");
  demo->require_subcommand(1);

  std::size_t nu_max = 10000;
  double c_exp = 0.5;
  std::string converge_out;
  CLI::App* conv = demo->add_subcommand(
      "converge", "Choi distance of the repetition ladder to its limit");
  conv->add_option("--nu-max", nu_max, "largest round count (decade ladder)")
      ->capture_default_str();
  conv->add_option("--c", c_exp, "weakness exponent, eps = nu^-c, in (0,1)")
      ->capture_default_str();
  conv->add_option("--out", converge_out, "write the table as CSV");

  CLI::App* gap = demo->add_subcommand(
      "gap", "transformation invariance and the separable excess");

  std::size_t imp_samples = 100000;
  std::uint64_t imp_seed = 2026;
  CLI::App* imp = demo->add_subcommand(
      "impossibility", "strict-decrease certificate for the W vector");
  imp->add_option("--samples", imp_samples, "random measurements to draw")
      ->capture_default_str();
  imp->add_option("--seed", imp_seed, "base seed")->capture_default_str();

  std::string classify_path;
  double classify_tol = 1e-9;
  CLI::App* cls = app.add_subcommand(
      "classify", "separability and PPT verdicts for an instrument");
  cls->add_option("instrument", classify_path, "instrument JSON file")
      ->required();
  cls->add_option("--tol", classify_tol, "eigenvalue tolerance")
      ->capture_default_str();

  std::string reduce_path, reduce_out;
  CLI::App* red = app.add_subcommand(
      "reduce", "normalize a protocol tree and compress its outcomes");
  red->add_option("protocol", reduce_path, "protocol JSON file")->required();
  red->add_option("--out", reduce_out, "write the reduced tree as JSON");

  std::string run_proto, run_state, run_out;
  CLI::App* run = app.add_subcommand(
      "run", "apply a protocol tree to a state and report outcomes");
  run->add_option("protocol", run_proto, "protocol JSON file")->required();
  run->add_option("--state", run_state, "density matrix JSON file")
      ->required();
  run->add_option("--out", run_out, "write labels/probabilities/states JSON");

  std::size_t mt_samples = 100000;
  std::uint64_t mt_seed = 2026;
  int mt_party = -1;
  std::size_t mt_star = 0;
  std::string mt_report;
  CLI::App* mt = app.add_subcommand(
      "monotone-test", "random-measurement suite for the tripartite monotone");
  mt->add_option("--samples", mt_samples, "number of random measurements")
      ->capture_default_str();
  mt->add_option("--seed", mt_seed, "base seed")->capture_default_str();
  mt->add_option("--party", mt_party,
                 "measured party, or -1 to draw uniformly")
      ->check(CLI::Range(-1, 2))
      ->capture_default_str();
  mt->add_option("--star", mt_star, "pivot party of the monotone")
      ->check(CLI::Range(0, 2))
      ->capture_default_str();
  mt->add_option("--report", mt_report, "CSV of the 100 worst average changes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (conv->parsed()) run_converge(nu_max, c_exp, converge_out);
    if (gap->parsed()) run_gap();
    if (imp->parsed()) run_impossibility(imp_samples, imp_seed);
    if (cls->parsed()) run_classify(classify_path, classify_tol);
    if (red->parsed()) run_reduce(reduce_path, reduce_out);
    if (run->parsed()) run_run(run_proto, run_state, run_out);
    if (mt->parsed()) run_monotone(mt_samples, mt_seed, mt_party, mt_star,
                                   mt_report);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return g_failures == 0 ? 0 : 1;
}
