#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "probkit/conditional.hpp"
#include "probkit/errors.hpp"
#include "probkit/event_algebra.hpp"
#include "probkit/measure.hpp"
#include "probkit/rational.hpp"

namespace probkit {

// ---------------------------------------------------------------------------
// Catalogue
// ---------------------------------------------------------------------------

enum class theorem_id {
  T1,   // impossible event has probability 0
  T2,   // finite additivity over disjoint families
  T3,   // partition probabilities sum to 1
  L1,   // pairwise disjointness == family-wide disjointness
  L2,   // pair union via P(A)+P(B)-P(A∩B)
  T4,   // inclusion-exclusion
  L3,   // disjoint pair additivity
  L4,   // disjoint family additivity
  L5,   // complement probability
  L6,   // monotonicity under inclusion
  L7,   // probabilities bounded by 1
  L8,   // conditional probability bounds
  P1,   // conditioning a disjoint event gives 0
  P2,   // conditioning on a subset gives 1
  P3,   // conditional addition over disjoint families
  T5,   // chain rule for intersections
  L9,   // independence in conditional form
  L10,  // mutual independence implies pairwise
  L11,  // independent positive events are not disjoint
  L12,  // total probability over partitions
  T6,   // Bayes posterior consistency
};

inline constexpr std::size_t catalogue_size = 21;

struct catalogue_entry {
  theorem_id id;
  const char* code;
  const char* title;
};

inline const std::array<catalogue_entry, catalogue_size>& catalogue() {
  static const std::array<catalogue_entry, catalogue_size> entries = {{
      {theorem_id::T1, "T1", "impossible event has probability 0"},
      {theorem_id::T2, "T2", "finite additivity over disjoint families"},
      {theorem_id::T3, "T3", "partition probabilities sum to 1"},
      {theorem_id::L1, "L1", "pairwise disjointness equals family-wide disjointness"},
      {theorem_id::L2, "L2", "P(A∪B) = P(A)+P(B)-P(A∩B)"},
      {theorem_id::T4, "T4", "inclusion-exclusion expansion of P(⋃Ai)"},
      {theorem_id::L3, "L3", "disjoint pair additivity"},
      {theorem_id::L4, "L4", "disjoint family additivity"},
      {theorem_id::L5, "L5", "P(Ā) = 1-P(A)"},
      {theorem_id::L6, "L6", "A ⊆ B implies P(A) <= P(B)"},
      {theorem_id::L7, "L7", "P(A) <= 1"},
      {theorem_id::L8, "L8", "0 <= P(A|B) <= 1 and P(A∩B) <= P(B)"},
      {theorem_id::P1, "P1", "disjoint events condition to 0"},
      {theorem_id::P2, "P2", "B ⊆ A implies P(A|B) = 1"},
      {theorem_id::P3, "P3", "conditional addition over disjoint families"},
      {theorem_id::T5, "T5", "chain rule for intersections"},
      {theorem_id::L9, "L9", "independence gives P(A|B)=P(A)"},
      {theorem_id::L10, "L10", "mutual independence implies pairwise independence"},
      {theorem_id::L11, "L11", "independent positive events are not disjoint"},
      {theorem_id::L12, "L12", "total probability over partitions"},
      {theorem_id::T6, "T6", "Bayes posterior equals direct conditional"},
  }};
  return entries;
}

enum class check_status { holds, violated, not_applicable };

inline const char* status_name(check_status s) {
  switch (s) {
    case check_status::holds: return "holds";
    case check_status::violated: return "violated";
    case check_status::not_applicable: return "not-applicable";
  }
  return "?";
}

struct theorem_result {
  long long checks = 0;      // assertions evaluated
  long long applicable = 0;  // inputs meeting the hypothesis
  bool violated = false;
  std::string counterexample;  // replayable description, set on first violation

  check_status status() const {
    if (violated) return check_status::violated;
    return applicable > 0 ? check_status::holds : check_status::not_applicable;
  }
};

struct verification_report {
  std::array<theorem_result, catalogue_size> results;
  std::uint64_t seed = 0;
  long long trials = 0;
  double elapsed_seconds = -1;  // filled only when timing is requested

  theorem_result& at(theorem_id id) { return results[static_cast<std::size_t>(id)]; }
  const theorem_result& at(theorem_id id) const {
    return results[static_cast<std::size_t>(id)];
  }

  bool any_violation() const {
    for (const auto& r : results)
      if (r.violated) return true;
    return false;
  }

  // Order-insensitive on disjoint inputs; first counterexample wins.
  void merge(const verification_report& other) {
    for (std::size_t i = 0; i < results.size(); ++i) {
      results[i].checks += other.results[i].checks;
      results[i].applicable += other.results[i].applicable;
      if (!results[i].violated && other.results[i].violated) {
        results[i].violated = true;
        results[i].counterexample = other.results[i].counterexample;
      }
    }
    trials += other.trials;
  }
};

struct suite_options {
  std::size_t ie_cap = default_inclusion_exclusion_cap;
};

// ---------------------------------------------------------------------------
// verify_all
// ---------------------------------------------------------------------------

namespace detail {

inline std::string describe_weights(const sample_space& sp, const probability_measure& m) {
  std::string s = "weights[";
  for (std::size_t i = 0; i < sp.size(); ++i) {
    if (i) s += ",";
    s += sp.label(i) + ":" + format_rational(m.weights()[i]);
  }
  return s + "]";
}

struct checker {
  theorem_result& r;
  std::string context;

  // Records one applicable check; on failure freezes the counterexample.
  void check(bool ok, const std::string& witness) {
    ++r.checks;
    ++r.applicable;
    if (!ok && !r.violated) {
      r.violated = true;
      r.counterexample = context + witness;
    }
  }
};

}  // namespace detail

// Runs every catalogue checker against the given measure using the supplied
// events (pairs and sorted triples drawn from them). A violation on a valid
// measure is an implementation defect, not a property of the input.
inline verification_report verify_all(const sample_space& sp, const probability_measure& m,
                                      std::span<const event> events,
                                      const suite_options& opt = {},
                                      const std::string& context = "") {
  verification_report rep;
  auto C = [&](theorem_id id) {
    return detail::checker{rep.at(id), context + detail::describe_weights(sp, m) + " "};
  };
  auto D = [&](const event& e) { return describe(sp, e); };

  const event empty = sp.empty_event();
  const event full = sp.full_event();

  // T1
  C(theorem_id::T1).check(m.prob(empty) == 0, "P(∅) != 0");

  // Per-event checks: L5, L7, T3 (complement split), L12 (singleton partition).
  {
    auto l5 = C(theorem_id::L5);
    auto l7 = C(theorem_id::L7);
    for (const auto& a : events) {
      rational pa = m.prob(a);
      l5.check(complement_prob(m, a) == m.prob(~a), "complement identity fails for " + D(a));
      l7.check(pa >= 0 && pa <= 1, "P out of [0,1] for " + D(a));
    }
  }

  // Partitions used by T3, L12, T6: the complement split of each event,
  // plus the singleton partition of the space.
  std::vector<std::vector<event>> partitions;
  for (const auto& a : events) partitions.push_back({a, ~a});
  {
    std::vector<event> singles;
    for (std::size_t i = 0; i < sp.size(); ++i) singles.push_back(sp.singleton(i));
    partitions.push_back(std::move(singles));
  }

  {
    auto t3 = C(theorem_id::T3);
    for (const auto& part : partitions) {
      rational sum = 0;
      for (const auto& b : part) sum += m.prob(b);
      t3.check(sum == 1, "partition probabilities sum to " + format_rational(sum));
    }
  }

  // Pair checks.
  {
    auto t2 = C(theorem_id::T2);
    auto l2 = C(theorem_id::L2);
    auto t4 = C(theorem_id::T4);
    auto l3 = C(theorem_id::L3);
    auto l6 = C(theorem_id::L6);
    auto l8 = C(theorem_id::L8);
    auto p1 = C(theorem_id::P1);
    auto p2 = C(theorem_id::P2);
    auto l9 = C(theorem_id::L9);
    auto l11 = C(theorem_id::L11);
    auto l12 = C(theorem_id::L12);
    auto t6 = C(theorem_id::T6);

    for (std::size_t i = 0; i < events.size(); ++i) {
      const event& a = events[i];
      rational pa = m.prob(a);

      // L12 / T6 against each complement-split partition.
      for (const auto& part : partitions) {
        auto tp = total_probability(m, a, part);
        l12.check(tp.value == pa, "total probability != P(A) for A=" + D(a));
        if (pa > 0) {
          rational post_sum = 0;
          bool ok = true;
          for (std::size_t bi = 0; bi < part.size(); ++bi) {
            if (m.prob(part[bi]) == 0) continue;
            rational post = bayes(m, bi, a, part);
            post_sum += post;
            if (post != cond_prob(m, part[bi], a)) ok = false;
          }
          t6.check(ok && post_sum == 1, "Bayes posterior mismatch for A=" + D(a));
        }
      }

      for (std::size_t j = 0; j < events.size(); ++j) {
        if (j == i) continue;
        const event& b = events[j];
        rational pb = m.prob(b);
        std::string pair = "A=" + D(a) + ", B=" + D(b);

        if (j > i) {
          l2.check(union_prob_pair(m, a, b) == m.prob(a | b), "pair union identity, " + pair);
          std::vector<event> fam{a, b};
          t4.check(inclusion_exclusion(m, fam, opt.ie_cap).total == m.prob(a | b),
                   "inclusion-exclusion n=2, " + pair);
          if (is_pme(a, b)) {
            t2.check(pa + pb == m.prob(a | b), "finite additivity, " + pair);
            l3.check(m.prob(a | b) == pa + pb, "disjoint pair additivity, " + pair);
          }
          if (is_independent(m, a, b) && pa > 0 && pb > 0) {
            l9.check(cond_prob(m, a, b) == pa && cond_prob(m, b, a) == pb,
                     "conditional form of independence, " + pair);
            l11.check(!is_pme(a, b), "independent positive events are disjoint, " + pair);
          }
        }
        if (a.subset_of(b)) l6.check(pa <= pb, "monotonicity, " + pair);
        if (pb > 0) {
          rational c = cond_prob(m, a, b);
          l8.check(c >= 0 && c <= 1 && m.prob(a & b) <= pb, "conditional bounds, " + pair);
          if (is_pme(a, b)) p1.check(c == 0, "P(A|B) != 0 for disjoint " + pair);
          if (b.subset_of(a)) p2.check(c == 1, "P(A|B) != 1 for B ⊆ A, " + pair);
        }
      }
    }
  }

  // Triple checks.
  {
    auto t2 = C(theorem_id::T2);
    auto l1 = C(theorem_id::L1);
    auto t4 = C(theorem_id::T4);
    auto l4 = C(theorem_id::L4);
    auto p3 = C(theorem_id::P3);
    auto t5 = C(theorem_id::T5);
    auto l10 = C(theorem_id::L10);

    for (std::size_t i = 0; i < events.size(); ++i)
      for (std::size_t j = i + 1; j < events.size(); ++j)
        for (std::size_t k = j + 1; k < events.size(); ++k) {
          const event &a = events[i], &b = events[j], &c = events[k];
          std::vector<event> fam{a, b, c};
          std::string triple = "A=" + D(a) + ", B=" + D(b) + ", C=" + D(c);

          // L1: pairwise disjointness must coincide with every
          // sub-collection of size >= 2 having empty intersection.
          {
            bool pairwise = is_pme_family(fam);
            bool subcollections_empty = (a.mask() & b.mask()).none() &&
                                        (a.mask() & c.mask()).none() &&
                                        (b.mask() & c.mask()).none() &&
                                        (a.mask() & b.mask() & c.mask()).none();
            l1.check(pairwise == subcollections_empty,
                     "family disjointness forms disagree, " + triple);
          }

          event u = a | b | c;
          t4.check(inclusion_exclusion(m, fam, opt.ie_cap).total == m.prob(u),
                   "inclusion-exclusion n=3, " + triple);

          if (is_pme_family(fam)) {
            rational s = m.prob(a) + m.prob(b) + m.prob(c);
            t2.check(s == m.prob(u), "finite additivity n=3, " + triple);
            l4.check(disjoint_union_prob(m, fam) == m.prob(u), "family additivity, " + triple);
          }

          if (is_pme(a, b) && m.prob(c) > 0) {
            std::vector<event> ab{a, b};
            p3.check(cond_addition(m, ab, c) == cond_prob(m, a | b, c),
                     "conditional addition, " + triple);
          }

          if (m.prob(a) > 0 && m.prob(a & b) > 0) {
            auto cr = chain_rule(m, fam);
            t5.check(cr.value == m.prob(a & b & c), "chain rule, " + triple);
          }

          if (is_mutually_independent(m, fam).ok) {
            l10.check(is_independent(m, a, b) && is_independent(m, a, c) &&
                          is_independent(m, b, c),
                      "mutual independence without pairwise, " + triple);
          }
        }
  }

  return rep;
}

// ---------------------------------------------------------------------------
// Seeded fuzzing
// ---------------------------------------------------------------------------

struct space_generator {
  std::uint64_t seed = 0;
  std::size_t max_outcomes = 8;
  std::uint64_t max_denominator = 1000;
  std::size_t events_per_trial = 6;
};

struct trial_data {
  sample_space space;
  probability_measure measure;
  std::vector<event> events;
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 step over seed ^ f(index); stable across platforms
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Reconstructs trial `index` of the given generator; fuzz(gen, n) runs
// trials 0..n-1 through verify_all. Identical arguments give identical
// trials on every platform (mt19937_64 with modulo draws only).
inline trial_data make_trial(const space_generator& gen, std::uint64_t index) {
  std::mt19937_64 rng(detail::mix_seed(gen.seed, index));
  std::size_t n = 1 + static_cast<std::size_t>(rng() % gen.max_outcomes);
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("o" + std::to_string(i + 1));
  sample_space sp(std::move(labels));

  std::vector<big_int> raw(n);
  big_int sum = 0;
  do {
    sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      raw[i] = big_int(rng() % (gen.max_denominator + 1));
      sum += raw[i];
    }
  } while (sum == 0);
  std::vector<rational> weights;
  weights.reserve(n);
  for (std::size_t i = 0; i < n; ++i) weights.emplace_back(raw[i], sum);
  probability_measure m(sp, std::move(weights));

  std::vector<event> events;
  events.reserve(gen.events_per_trial);
  for (std::size_t e = 0; e < gen.events_per_trial; ++e) {
    bitmask mask(n);
    for (std::size_t i = 0; i < n; ++i)
      if (rng() & 1) mask.set(i);
    events.push_back(sp.event_from_mask(mask));
  }
  return {std::move(sp), std::move(m), std::move(events)};
}

inline verification_report fuzz(const space_generator& gen, long long trials,
                                const suite_options& opt = {}) {
  if (trials < 1) throw std::invalid_argument("fuzz requires trials >= 1");
  verification_report total;
  total.seed = gen.seed;
  for (long long t = 0; t < trials; ++t) {
    trial_data td = make_trial(gen, static_cast<std::uint64_t>(t));
    std::string ctx = "seed=" + std::to_string(gen.seed) + " trial=" + std::to_string(t) + ": ";
    verification_report r = verify_all(td.space, td.measure, td.events, opt, ctx);
    r.trials = 1;
    total.merge(r);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

inline std::string report_to_text(const verification_report& rep) {
  std::string out;
  for (const auto& entry : catalogue()) {
    const auto& r = rep.at(entry.id);
    out += std::string(entry.code) + ": " + status_name(r.status()) + " (" +
           std::to_string(r.applicable) + " applicable / " + std::to_string(r.checks) +
           " checks) " + entry.title + "\n";
    if (r.violated) out += "  counterexample: " + r.counterexample + "\n";
  }
  if (rep.trials > 0)
    out += "trials: " + std::to_string(rep.trials) + " seed: " + std::to_string(rep.seed) + "\n";
  if (rep.elapsed_seconds >= 0)
    out += "elapsed: " + std::to_string(rep.elapsed_seconds) + "s\n";
  out += rep.any_violation() ? "result: VIOLATIONS FOUND\n" : "result: all entries hold\n";
  return out;
}

inline nlohmann::json report_to_json(const verification_report& rep) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& entry : catalogue()) {
    const auto& r = rep.at(entry.id);
    nlohmann::json e{{"id", entry.code},
                     {"title", entry.title},
                     {"status", status_name(r.status())},
                     {"checks", r.checks},
                     {"applicable", r.applicable}};
    if (r.violated) e["counterexample"] = r.counterexample;
    entries.push_back(e);
  }
  nlohmann::json j{{"entries", entries}, {"violations", rep.any_violation()}};
  if (rep.trials > 0) {
    j["trials"] = rep.trials;
    j["seed"] = rep.seed;
  }
  if (rep.elapsed_seconds >= 0) j["elapsed_seconds"] = rep.elapsed_seconds;
  return j;
}

// ---------------------------------------------------------------------------
// Dependency diagram
// ---------------------------------------------------------------------------

// Directed graph of which earlier results each proof leans on. Axioms are
// the gray boxes; the two clusters split combination-of-events results
// from dependent-events results. Edges from an alternate proof of the
// same result are dashed and tagged alt="true".
inline std::string emit_dependency_graph() {
  struct edge {
    const char* from;
    const char* to;
    bool alt;
  };
  static const edge edges[] = {
      {"A3", "T1", false},
      {"A3", "T2", false}, {"T1", "T2", false},
      {"T2", "T3", false}, {"A2", "T3", false},
      {"T2", "L2", false},
      {"L2", "T4", false},
      {"L2", "L3", false}, {"T1", "L3", false}, {"T2", "L3", true},
      {"L1", "L4", false}, {"T2", "L4", false},
      {"A2", "L5", false}, {"L3", "L5", false}, {"L2", "L5", true},
      {"L3", "L6", false}, {"A1", "L6", false},
      {"L6", "L7", false}, {"A2", "L7", false},
      {"A1", "L8", false}, {"L7", "L8", false},
      {"L8", "P1", false}, {"T1", "P1", false},
      {"L8", "P2", false},
      {"L8", "P3", false}, {"L4", "P3", false},
      {"L8", "T5", false},
      {"L8", "L9", false},
      {"L9", "L10", false},
      {"L9", "L11", false}, {"T1", "L11", false},
      {"L8", "L12", false}, {"T2", "L12", false},
      {"L8", "T6", false}, {"L12", "T6", false},
  };
  static const char* combination_ids[] = {"T1", "T2", "T3", "L1", "L2", "T4",
                                          "L3", "L4", "L5", "L6", "L7"};
  static const char* dependent_ids[] = {"L8", "P1", "P2", "P3", "T5", "L9",
                                        "L10", "L11", "L12", "T6"};

  auto title_of = [](const std::string& code) -> std::string {
    for (const auto& e : catalogue())
      if (code == e.code) return e.title;
    return "";
  };

  std::string out;
  out += "digraph probability_results {\n";
  out += "  rankdir=BT;\n";
  out += "  node [shape=box];\n";
  out += "  A1 [label=\"A1: non-negativity\", style=filled, fillcolor=gray80];\n";
  out += "  A2 [label=\"A2: total probability is 1\", style=filled, fillcolor=gray80];\n";
  out += "  A3 [label=\"A3: additivity over disjoint events\", style=filled, fillcolor=gray80];\n";
  out += "  subgraph cluster_combinations {\n";
  out += "    label=\"combinations of events\";\n";
  for (const char* id : combination_ids)
    out += "    " + std::string(id) + " [label=\"" + id + ": " + title_of(id) + "\"];\n";
  out += "  }\n";
  out += "  subgraph cluster_dependent {\n";
  out += "    label=\"dependent events\";\n";
  for (const char* id : dependent_ids)
    out += "    " + std::string(id) + " [label=\"" + id + ": " + title_of(id) + "\"];\n";
  out += "  }\n";
  for (const auto& e : edges) {
    out += "  " + std::string(e.from) + " -> " + e.to;
    if (e.alt) out += " [style=dashed, alt=\"true\"]";
    out += ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace probkit
