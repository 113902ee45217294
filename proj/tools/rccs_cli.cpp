// rccs: command-line front end. Every subcommand prints a run report
// (text by default, JSON with --json) and re-checks whatever it built
// before calling it a success.
//
// Exit codes: 0 success / verdict true, 1 verdict false,
//             2 domain error, 3 parse or usage error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "rccs/json_io.hpp"
#include "rccs/rccs.hpp"

namespace {

using namespace rccs;
using io::json;

enum Exit { kOk = 0, kFalse = 1, kDomain = 2, kParse = 3 };

struct RunReport {
  std::string command;
  std::string inputs_digest;
  std::string outcome;
  json payload = json::object();
  std::vector<std::string> summary;
};

// 64-bit FNV-1a over the argument vector and the contents of input files.
class Digest {
 public:
  void add(std::string_view bytes) {
    for (unsigned char ch : bytes) {
      h_ ^= ch;
      h_ *= 0x100000001b3ULL;
    }
    h_ ^= 0xff;  // field separator
    h_ *= 0x100000001b3ULL;
  }
  std::string hex() const {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h_;
    return os.str();
  }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

struct Options {
  bool as_json = false;
  bool decimal = false;
};

Digest g_digest;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  g_digest.add(text);
  return text;
}

json read_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  for (const auto& name : out)
    if (name.empty()) throw Error(ErrorCode::ParseError, "empty name in list \"" + s + "\"");
  return out;
}

std::pair<std::string, std::string> split_pair(const std::string& s) {
  const auto names = split_names(s);
  if (names.size() != 2) throw Error(ErrorCode::ParseError, "--pair expects two names, e.g. A,B");
  return {names[0], names[1]};
}

Rational parse_arg(const std::string& text, const std::string& flag) {
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, flag + ": " + e.what());
  }
}

// Mirrors `j` with every "p/q" string replaced by a double.
json approximate(const json& j) {
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : j.items()) {
      json sub = approximate(v);
      if (!sub.is_null()) out[k] = std::move(sub);
    }
    return out.empty() ? json() : out;
  }
  if (j.is_array()) {
    json out = json::array();
    bool any = false;
    for (const auto& v : j) {
      out.push_back(approximate(v));
      any = any || !out.back().is_null();
    }
    return any ? out : json();
  }
  if (j.is_string()) {
    try {
      return to_double(parse_rational(j.get<std::string>()));
    } catch (const Error&) {
      return json();
    }
  }
  return json();
}

int emit(const RunReport& r, const Options& opt, int code) {
  if (opt.as_json) {
    json out{{"command", r.command},
             {"inputs_digest", r.inputs_digest},
             {"outcome", r.outcome},
             {"payload", r.payload},
             {"summary", r.summary},
             {"exit_code", code}};
    if (opt.decimal) out["decimal_non_authoritative"] = approximate(r.payload);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << r.command << "  [" << r.outcome << "]  digest " << r.inputs_digest << "\n";
    for (const auto& line : r.summary) std::cout << "  " << line << "\n";
    std::cout << r.payload.dump(2) << "\n";
    if (opt.decimal)
      std::cout << "approximate values (non-authoritative):\n" << approximate(r.payload).dump(2) << "\n";
  }
  return code;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

struct Pair {
  io::SpaceDocument doc;
  Event A, B;
};

Pair load_pair(const std::string& space_path, const std::string& pair) {
  auto doc = io::space_from_json(read_json(space_path));
  const auto [a, b] = split_pair(pair);
  Event A = doc.event(a), B = doc.event(b);
  return {std::move(doc), std::move(A), std::move(B)};
}

Partition load_partition(const io::SpaceDocument& doc, const std::string& names) {
  std::vector<Event> cells;
  for (const auto& name : split_names(names)) cells.push_back(doc.event(name));
  return validate_partition(doc.space, std::move(cells));
}

void apply_env_retries(Schedule& s) {
  if (const char* env = std::getenv("RCCS_MAX_RETRIES")) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      s.max_retries = v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, std::string("RCCS_MAX_RETRIES is not an integer: ") + env);
    }
  }
}

// ---- subcommands -----------------------------------------------------------

int run_verify_fork(RunReport& r, const std::string& space, const std::string& pair,
                    const std::string& cause) {
  auto p = load_pair(space, pair);
  const auto report = verify_fork(p.doc.space, p.A, p.B, p.doc.event(cause));
  r.payload = io::to_json(report);
  r.payload["summary"] = io::to_json(correlation_summary(p.doc.space, p.A, p.B));
  r.outcome = report.verdict ? "verdict-true" : "verdict-false";
  r.summary.push_back("conjunctive fork: " + yes_no(report.verdict));
  for (std::size_t i = 0; i < 5; ++i)
    r.summary.push_back(std::string(ForkReport::kConditionIds[i]) + ": " + yes_no(report.conditions[i]));
  return report.verdict ? kOk : kFalse;
}

int run_verify_rccs(RunReport& r, const std::string& space, const std::string& pair,
                    const std::string& partition) {
  auto p = load_pair(space, pair);
  const auto part = load_partition(p.doc, partition);
  const auto report = verify_rccs(p.doc.space, p.A, p.B, part);
  const bool oracle = oracle::verify_by_enumeration(p.doc.space, p.A, p.B, part);
  if (oracle != report.verdict) throw std::logic_error("integer cross-check disagrees with verify_rccs");
  r.payload = io::to_json(report);
  r.payload["integer_cross_check"] = oracle;
  r.outcome = report.verdict ? "verdict-true" : "verdict-false";
  r.summary.push_back("common cause system of size " + std::to_string(part.size()) + ": " +
                      yes_no(report.verdict));
  if (report.definition_verdict != report.verdict)
    r.summary.push_back("note: conditions hold only with a conditional at 0 or 1 in some cell");
  return report.verdict ? kOk : kFalse;
}

struct ConstructArgs {
  std::string a, b, pab, mode = "realizable", epsilon, shrink, request;
  std::size_t n = 2;
  std::optional<int> max_retries;
};

ConstructionRequest build_request(const ConstructArgs& c) {
  ConstructionRequest req;
  if (!c.request.empty()) {
    req = io::request_from_json(read_json(c.request));
  } else {
    if (c.a.empty() || c.b.empty() || c.pab.empty())
      throw Error(ErrorCode::ParseError, "construct needs --a, --b and --pab (or --request)");
    try {
      req.target = CorrelationSummary::from_marginals(parse_arg(c.a, "--a"), parse_arg(c.b, "--b"),
                                                      parse_arg(c.pab, "--pab"));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) throw;
      throw Error(ErrorCode::ParseError, e.what());
    }
    req.n = c.n;
    req.mode = io::mode_from_string(c.mode);
  }
  if (!c.epsilon.empty()) req.schedule.epsilon = parse_arg(c.epsilon, "--epsilon");
  if (!c.shrink.empty()) req.schedule.shrink = parse_arg(c.shrink, "--shrink");
  apply_env_retries(req.schedule);
  if (c.max_retries) req.schedule.max_retries = *c.max_retries;
  return req;
}

int run_construct(RunReport& r, const ConstructArgs& args) {
  const auto req = build_request(args);
  const auto set = construct_admissible_star(req);
  const auto check = check_admissible_star(set);
  const bool ok = check.verdict && (req.mode == ConstructionMode::Literal || check.joint_sum_matches);
  r.payload = {{"request", io::to_json(req)}, {"set", io::to_json(set)}, {"check", io::to_json(check)}};
  r.outcome = ok ? "constructed" : "check-failed";
  r.summary.push_back("admissible* set of size " + std::to_string(set.n()) + " (" +
                      io::to_string(req.mode) + " mode)");
  r.summary.push_back("checker verdict: " + yes_no(check.verdict));
  r.summary.push_back("joint sum " + to_string(check.joint_sum) + " vs p(A and B) " +
                      to_string(req.target.pAB));
  return ok ? kOk : kFalse;
}

int run_extend(RunReport& r, const std::string& space, const std::string& pair, std::size_t n,
               const std::string& mode, const std::string& out_path) {
  auto p = load_pair(space, pair);
  ConstructionRequest req;
  req.target = correlation_summary(p.doc.space, p.A, p.B);
  req.n = n;
  req.mode = io::mode_from_string(mode);
  apply_env_retries(req.schedule);
  const auto set = construct_admissible_star(req);
  const auto ext = extend_with_rccs(p.doc.space, p.A, p.B, set);
  const auto hom = verify_homomorphism(ext, p.doc.space);
  const Event hA = ext.lift(p.A), hB = ext.lift(p.B);
  const auto rccs_report = verify_rccs(ext.new_space, hA, hB, ext.rccs);
  const bool summary_kept = correlation_summary(ext.new_space, hA, hB) == req.target;
  const bool ok = hom.verdict && rccs_report.verdict && summary_kept;

  const auto [a_name, b_name] = split_pair(pair);
  const json extension = io::extension_to_json(ext, p.doc.space, {{a_name, p.A}, {b_name, p.B}});
  r.payload = {{"set", io::to_json(set)},
               {"homomorphism", io::to_json(hom)},
               {"rccs", io::to_json(rccs_report)},
               {"correlation_preserved", summary_kept},
               {"atoms", ext.new_space.size()}};
  if (out_path.empty()) {
    r.payload["extension"] = extension;
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + out_path);
    out << extension.dump(2) << "\n";
    r.payload["written_to"] = out_path;
  }
  r.outcome = ok ? "extended" : "verification-failed";
  r.summary.push_back(std::to_string(ext.new_space.size()) + "-atom extension carrying a system of size " +
                      std::to_string(n));
  r.summary.push_back("embedding verified: " + yes_no(hom.verdict) + " (" +
                      std::to_string(hom.events_checked) + " events)");
  r.summary.push_back("common cause system verified: " + yes_no(rccs_report.verdict));
  return ok ? kOk : kFalse;
}

int run_counterexample(RunReport& r) {
  const auto cx = realize_counterexample();
  const auto diag = diagnose_cancellation(cx.space, cx.A, cx.B, cx.partition);
  const auto summary = correlation_summary(cx.space, cx.A, cx.B);
  const auto rccs_report = verify_rccs(cx.space, cx.A, cx.B, cx.partition);
  const auto dec = correlation_decomposition(cx.space, cx.A, cx.B, cx.partition);
  r.payload = io::to_json(diag);
  r.payload["space"] = io::space_to_json(cx.space, {{"A", cx.A}, {"B", cx.B}});
  r.payload["pair"] = io::to_json(summary);
  r.payload["rccs"] = io::to_json(rccs_report);
  r.payload["decomposition"] = io::to_json(dec);
  const bool reproduced = diag.cancellation() && is_zero(diag.defect_sum) && !rccs_report.verdict;
  r.outcome = reproduced ? "reproduced" : "not-reproduced";
  for (std::size_t i = 0; i < diag.residuals.size(); ++i)
    r.summary.push_back("cell " + std::to_string(i + 1) + ": residual " + to_string(diag.residuals[i]) +
                        ", weighted defect " + to_string(diag.weighted_defects[i]));
  r.summary.push_back("weighted defect sum: " + to_string(diag.defect_sum));
  r.summary.push_back("sum of a_i b_i c_i: " + to_string(diag.admissible.joint_sum) + " = p(A and B) " +
                      to_string(summary.pAB));
  r.summary.push_back("admissible conditions: " + yes_no(diag.admissible_verdict));
  r.summary.push_back("screening off: " + yes_no(diag.screening_verdict));
  r.summary.push_back(
      "conclusion: the defects cancel in the weighted sum, so every admissibility condition holds "
      "while no cell screens off; admissibility alone does not force screening off");
  r.payload["conclusion"] = r.summary.back();
  return reproduced ? kOk : kFalse;
}

int run_diagnose(RunReport& r, const std::string& space, const std::string& pair,
                 const std::string& partition) {
  auto p = load_pair(space, pair);
  const auto part = load_partition(p.doc, partition);
  const auto diag = diagnose_cancellation(p.doc.space, p.A, p.B, part);
  r.payload = io::to_json(diag);
  r.outcome = diag.cancellation() ? "cancellation" : "no-cancellation";
  r.summary.push_back("weighted defect sum: " + to_string(diag.defect_sum));
  r.summary.push_back("admissible conditions: " + yes_no(diag.admissible_verdict));
  r.summary.push_back("screening off: " + yes_no(diag.screening_verdict));
  return kOk;
}

int run_oracle(RunReport& r, const std::string& space, const std::string& pair, std::size_t n,
               std::size_t max_partitions) {
  auto p = load_pair(space, pair);
  oracle::SearchBudget budget;
  budget.max_partitions = max_partitions;
  const auto result = oracle::enumerate_rccs(p.doc.space, p.A, p.B, n, budget);
  json found = json::array();
  for (const auto& part : result.found) {
    if (!verify_rccs(p.doc.space, p.A, p.B, part).verdict)
      throw std::logic_error("oracle returned a partition verify_rccs rejects");
    found.push_back(io::partition_to_json(part));
  }
  r.payload = {{"n", n}, {"examined", result.examined}, {"found", std::move(found)}};
  r.outcome = result.found.empty() ? "none-found" : "found";
  r.summary.push_back(std::to_string(result.examined) + " partitions examined, " +
                      std::to_string(result.found.size()) + " common cause systems");
  return result.found.empty() ? kFalse : kOk;
}

int run_identities(RunReport& r, std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> weight(0, 9), atoms(2, 8);
  std::bernoulli_distribution coin(0.5);
  std::size_t holds = 0, screening_cases = 0;
  json failures = json::array();
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t k = static_cast<std::size_t>(atoms(rng));
    std::vector<int> raw(k);
    long total = 0;
    for (auto& w : raw) total += (w = 1 + weight(rng));
    std::vector<Atom> list;
    for (std::size_t i = 0; i < k; ++i) list.push_back({"x" + std::to_string(i), make_rational(raw[i], total)});
    ProbSpace space(std::move(list));
    boost::dynamic_bitset<> xa(k), xb(k);
    for (std::size_t i = 0; i < k; ++i) {
      xa[i] = coin(rng);
      xb[i] = coin(rng);
    }
    const Event X = space.event_from_bits(xa), Y = space.event_from_bits(xb);
    // Cells: first the trivial partition, then random ones.
    const std::size_t m = t == 0 ? 1 : 1 + rng() % k;
    std::vector<std::vector<std::size_t>> blocks(m);
    for (std::size_t i = 0; i < k; ++i) blocks[i < m ? i : rng() % m].push_back(i);
    std::vector<Event> cells;
    for (const auto& b : blocks) cells.push_back(space.event_from_indices(b));
    const auto part = validate_partition(space, std::move(cells));
    const auto d = correlation_decomposition(space, X, Y, part);
    if (is_zero(d.residual())) {
      ++holds;
    } else {
      failures.push_back({{"instance", t}, {"residual", to_string(d.residual())}});
    }
    if (part.size() >= 2 && verify_rccs(space, X, Y, part).definition_verdict) {
      ++screening_cases;
      if (!is_zero(d.defect_sum) || d.pair_covariance != d.comonotone_sum)
        failures.push_back({{"instance", t}, {"screening_case", to_string(d.defect_sum)}});
    }
  }
  r.payload = {{"seed", seed},
               {"instances", count},
               {"identity_holds", holds},
               {"screening_cases", screening_cases},
               {"failures", failures}};
  const bool ok = failures.empty();
  r.outcome = ok ? "all-hold" : "failures";
  r.summary.push_back("decomposition holds on " + std::to_string(holds) + "/" + std::to_string(count) +
                      " instances");
  r.summary.push_back(std::to_string(screening_cases) + " instances were common cause systems");
  return ok ? kOk : kFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-arithmetic toolkit for common cause systems"};
  app.require_subcommand(1);
  Options opt;
  app.add_flag("--json", opt.as_json, "print the run report as JSON");
  app.add_flag("--decimal", opt.decimal, "append approximate decimal values (non-authoritative)");

  std::string space, pair, partition, cause, mode = "realizable", out_path;
  std::size_t n = 2, max_partitions = 5'000'000, count = 100;
  std::uint64_t seed = 1;
  ConstructArgs cargs;

  auto* verify = app.add_subcommand("verify", "check a conjunctive fork or a common cause system");
  verify->require_subcommand(1);
  auto* fork = verify->add_subcommand("fork", "conjunctive fork conditions");
  fork->add_option("--space", space, "space JSON")->required();
  fork->add_option("--pair", pair, "events A,B")->required();
  fork->add_option("--cause", cause, "cause event C")->required();
  auto* rccs_cmd = verify->add_subcommand("rccs", "common cause system conditions");
  rccs_cmd->add_option("--space", space, "space JSON")->required();
  rccs_cmd->add_option("--pair", pair, "events A,B")->required();
  rccs_cmd->add_option("--partition", partition, "cells C1,C2,...")->required();

  auto* construct = app.add_subcommand("construct", "build an admissible* number set");
  construct->add_option("--a", cargs.a, "p(A)");
  construct->add_option("--b", cargs.b, "p(B)");
  construct->add_option("--pab", cargs.pab, "p(A and B)");
  construct->add_option("--n", cargs.n, "size");
  construct->add_option("--mode", cargs.mode, "literal | realizable");
  construct->add_option("--epsilon", cargs.epsilon, "initial tiny-cell weight");
  construct->add_option("--shrink", cargs.shrink, "epsilon shrink factor");
  construct->add_option("--max-retries", cargs.max_retries, "retry cap");
  construct->add_option("--request", cargs.request, "ConstructionRequest JSON file");

  auto* extend = app.add_subcommand("extend", "extend a space with a common cause system");
  extend->add_option("--space", space, "space JSON")->required();
  extend->add_option("--pair", pair, "events A,B")->required();
  extend->add_option("--n", n, "size");
  extend->add_option("--mode", mode, "literal | realizable");
  extend->add_option("--out", out_path, "write the extension JSON here");

  auto* counter = app.add_subcommand("counterexample", "two-cell set that is admissible but does not screen off");

  auto* diagnose = app.add_subcommand("diagnose", "per-cell screening defects of a partition");
  diagnose->add_option("--space", space, "space JSON")->required();
  diagnose->add_option("--pair", pair, "events A,B")->required();
  diagnose->add_option("--partition", partition, "cells C1,C2,...")->required();

  auto* search = app.add_subcommand("oracle-search", "enumerate every common cause system of size n");
  search->add_option("--space", space, "space JSON")->required();
  search->add_option("--pair", pair, "events A,B")->required();
  search->add_option("--n", n, "size");
  search->add_option("--max-partitions", max_partitions, "enumeration budget");

  auto* identities = app.add_subcommand("identities", "randomized check of the covariance decomposition");
  identities->add_option("--seed", seed, "generator seed");
  identities->add_option("--count", count, "number of instances");

  for (auto* sub : {fork, rccs_cmd, construct, extend, counter, diagnose, search, identities}) {
    sub->add_flag("--json", opt.as_json, "print the run report as JSON");
    sub->add_flag("--decimal", opt.decimal, "append approximate decimal values (non-authoritative)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  RunReport r;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) r.command += ' ';
    r.command += argv[i];
  }
  for (int i = 1; i < argc; ++i) g_digest.add(argv[i]);

  int code = kOk;
  try {
    if (fork->parsed()) code = run_verify_fork(r, space, pair, cause);
    else if (rccs_cmd->parsed()) code = run_verify_rccs(r, space, pair, partition);
    else if (construct->parsed()) code = run_construct(r, cargs);
    else if (extend->parsed()) code = run_extend(r, space, pair, n, mode, out_path);
    else if (counter->parsed()) code = run_counterexample(r);
    else if (diagnose->parsed()) code = run_diagnose(r, space, pair, partition);
    else if (search->parsed()) code = run_oracle(r, space, pair, n, max_partitions);
    else if (identities->parsed()) code = run_identities(r, seed, count);
  } catch (const Error& e) {
    code = e.code() == ErrorCode::ParseError ? kParse : kDomain;
    r.outcome = "error";
    r.payload = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    r.summary = {e.what()};
    if (e.code() == ErrorCode::StrictCorrelationUnsupported)
      r.summary.push_back(
          "note: the pair has a quadrant of probability 0; interior conditionals in every cell would "
          "give that quadrant positive mass, so no realizable set exists");
  }
  r.inputs_digest = g_digest.hex();
  if (code >= kDomain && !opt.as_json) {
    for (const auto& line : r.summary) std::cerr << line << "\n";
    return code;
  }
  return emit(r, opt, code);
}
