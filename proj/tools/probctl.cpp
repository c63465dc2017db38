// probctl: command-line front end for exact finite-probability computations.
//
// Subcommands: check, query, verify, fuzz, graph.
// Exit codes: 0 success, 1 violation or false result, 2 usage error,
// 3 input error (syntax or validation).

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "probkit/query.hpp"
#include "probkit/theorems.hpp"

using namespace probkit;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_violation = 1;
constexpr int exit_usage = 2;
constexpr int exit_input = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::unknown_name, "cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t ie_cap_from_env() {
  if (const char* v = std::getenv("PROBKIT_IE_CAP")) {
    char* end = nullptr;
    unsigned long long cap = std::strtoull(v, &end, 10);
    if (end && *end == '\0' && cap >= 1) return static_cast<std::size_t>(cap);
    throw error(errc::invalid_weight, "PROBKIT_IE_CAP must be a positive integer");
  }
  return default_inclusion_exclusion_cap;
}

nlohmann::json report_json(const axiom_report& rep) {
  return nlohmann::json{{"nonneg_ok", rep.nonneg_ok},
                        {"normalized_ok", rep.normalized_ok},
                        {"additivity_ok", rep.additivity_ok},
                        {"witnesses", rep.witnesses}};
}

void render_axiom_report(const axiom_report& rep, bool json) {
  if (json) {
    std::cout << report_json(rep).dump(2) << "\n";
    return;
  }
  std::cout << "non-negativity: " << (rep.nonneg_ok ? "ok" : "violated") << "\n"
            << "normalization: " << (rep.normalized_ok ? "ok" : "violated") << "\n"
            << "additivity: " << (rep.additivity_ok ? "ok" : "violated") << "\n";
  for (const auto& w : rep.witnesses) std::cout << "witness: " << w << "\n";
}

// Events fed to `verify`: the file's named events, the sure and impossible
// events, and every event when the space is small enough to enumerate.
std::vector<event> events_for_verify(const space_file& sf) {
  std::vector<event> events;
  if (sf.space.size() <= 6) {
    for (std::size_t m = 0; m < (std::size_t{1} << sf.space.size()); ++m)
      events.push_back(sf.space.event_from_mask(bitmask(sf.space.size(), m)));
    return events;
  }
  events.push_back(sf.space.empty_event());
  events.push_back(sf.space.full_event());
  for (std::size_t i = 0; i < sf.space.size(); ++i) events.push_back(sf.space.singleton(i));
  for (const auto& [name, e] : sf.events) events.push_back(e);
  return events;
}

int run_check(const std::string& path, bool json) {
  std::string text = read_file(path);
  try {
    space_file sf = parse_space_file(text);
    render_axiom_report(validate_measure(sf.space, sf.measure), json);
    return exit_ok;
  } catch (const error& e) {
    if (e.code() == errc::invalid_weight) {
      std::cerr << e.what() << "\n";
      return exit_input;
    }
    throw;
  }
}

int run_query(const std::string& path, const std::string& query_text, bool decimal, bool json) {
  space_file sf = parse_space_file(read_file(path));
  query_ast q = parse_query(query_text);
  eval_result res = eval_query(sf, q);
  if (res.t == eval_result::type::number) {
    if (json) {
      nlohmann::json j{{"value", format_rational(res.num)}};
      if (decimal) j["decimal"] = format_decimal(res.num);
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << (decimal ? format_decimal(res.num) : format_rational(res.num)) << "\n";
    }
    return exit_ok;
  }
  if (json) {
    nlohmann::json j{{"value", res.flag}};
    if (!res.detail.empty()) j["detail"] = res.detail;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (res.flag ? "true" : "false") << "\n";
    if (!res.detail.empty()) std::cout << res.detail << "\n";
  }
  return res.flag ? exit_ok : exit_violation;
}

int run_verify(const std::string& path, bool json, std::size_t ie_cap) {
  space_file sf = parse_space_file(read_file(path));
  suite_options opt{.ie_cap = ie_cap};
  verification_report rep = verify_all(sf.space, sf.measure, events_for_verify(sf), opt);
  if (json)
    std::cout << report_to_json(rep).dump(2) << "\n";
  else
    std::cout << report_to_text(rep);
  return rep.any_violation() ? exit_violation : exit_ok;
}

int run_fuzz(const space_generator& gen, long long trials, bool json, bool timing,
             std::size_t ie_cap) {
  suite_options opt{.ie_cap = ie_cap};
  auto start = std::chrono::steady_clock::now();
  verification_report rep = fuzz(gen, trials, opt);
  if (timing)
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (json)
    std::cout << report_to_json(rep).dump(2) << "\n";
  else
    std::cout << report_to_text(rep);
  return rep.any_violation() ? exit_violation : exit_ok;
}

int run_graph(const std::string& out_path) {
  std::string dot = emit_dependency_graph();
  if (out_path.empty()) {
    std::cout << dot;
    return exit_ok;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw error(errc::unknown_name, "cannot write file '" + out_path + "'");
  out << dot;
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact finite-probability engine"};
  app.require_subcommand(1);

  std::string file;
  std::string query_text;
  std::string out_path;
  std::string format = "text";
  bool decimal = false;
  bool timing = false;
  space_generator gen;
  long long trials = 0;

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
  };

  auto* check = app.add_subcommand("check", "parse a .prob file and validate its measure");
  check->add_option("file", file, "input .prob file")->required();
  add_format(check);

  auto* query = app.add_subcommand("query", "evaluate a probability query against a file");
  query->add_option("file", file, "input .prob file")->required();
  query->add_option("query", query_text, "query text, e.g. \"P(A | B)\"")->required();
  query->add_flag("--decimal", decimal, "print a 20-digit decimal instead of a rational");
  add_format(query);

  auto* verify = app.add_subcommand("verify", "run the result catalogue against a file");
  verify->add_option("file", file, "input .prob file")->required();
  add_format(verify);

  auto* fuzz_cmd = app.add_subcommand("fuzz", "run the catalogue on seeded random spaces");
  fuzz_cmd->add_option("--seed", gen.seed, "generator seed")->required();
  fuzz_cmd->add_option("--trials", trials, "number of trials")->required();
  fuzz_cmd->add_option("--max-outcomes", gen.max_outcomes, "largest space size");
  fuzz_cmd->add_option("--max-denominator", gen.max_denominator, "largest raw weight");
  fuzz_cmd->add_option("--events", gen.events_per_trial, "events sampled per trial");
  fuzz_cmd->add_flag("--timing", timing, "include elapsed time in the report");
  add_format(fuzz_cmd);

  auto* graph = app.add_subcommand("graph", "emit the result dependency diagram as DOT");
  graph->add_option("--out", out_path, "write DOT here instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  bool json = format == "json";
  try {
    std::size_t ie_cap = ie_cap_from_env();
    if (check->parsed()) return run_check(file, json);
    if (query->parsed()) return run_query(file, query_text, decimal, json);
    if (verify->parsed()) return run_verify(file, json, ie_cap);
    if (fuzz_cmd->parsed()) return run_fuzz(gen, trials, json, timing, ie_cap);
    if (graph->parsed()) return run_graph(out_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const error& e) {
    std::cerr << e.what() << "\n";
    return exit_input;
  }
  return exit_usage;
}
