#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "probkit/errors.hpp"
#include "probkit/event_algebra.hpp"
#include "probkit/rational.hpp"

namespace probkit {

struct axiom_report {
  bool nonneg_ok = true;
  bool normalized_ok = true;
  bool additivity_ok = true;
  std::vector<std::string> witnesses;

  bool all_ok() const { return nonneg_ok && normalized_ok && additivity_ok; }
};

// Exact nonnegative rational weight per outcome, summing to 1.
class probability_measure {
 public:
  probability_measure(const sample_space& sp, std::vector<rational> weights)
      : space_id_(sp.id()), weights_(std::move(weights)) {
    if (weights_.size() != sp.size())
      throw error(errc::invalid_weight, "expected one weight per outcome");
    rational sum = 0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (weights_[i] < 0)
        throw error(errc::invalid_weight,
                    "negative weight " + format_rational(weights_[i]) + " for outcome '" +
                        sp.label(i) + "'");
      sum += weights_[i];
    }
    if (sum != 1)
      throw error(errc::invalid_weight,
                  "weights sum to " + format_rational(sum) + ", expected 1");
  }

  // Bypasses axiom validation. Exists so the theorem suite can be pointed
  // at deliberately broken measures in fault-injection tests.
  static probability_measure unchecked(const sample_space& sp, std::vector<rational> weights) {
    probability_measure m;
    m.space_id_ = sp.id();
    m.weights_ = std::move(weights);
    return m;
  }

  std::uint64_t space_id() const { return space_id_; }
  const std::vector<rational>& weights() const { return weights_; }

  // Exact sum of the weights of the outcomes in the event.
  rational prob(const event& a) const {
    if (a.space_id() != space_id_)
      throw error(errc::space_mismatch, "event belongs to a different space");
    rational sum = 0;
    for (std::size_t i = a.mask().find_first(); i != bitmask::npos;
         i = a.mask().find_next(i))
      sum += weights_[i];
    return sum;
  }

 private:
  probability_measure() = default;

  std::uint64_t space_id_ = 0;
  std::vector<rational> weights_;
};

// Checks the three axioms on atom weights. For an atom-weight measure,
// additivity is structural, so it is verified on disjoint event pairs:
// exhaustively for |Ω| <= 6, on seeded samples beyond that.
inline axiom_report validate_weights(const sample_space& sp,
                                     std::span<const rational> weights) {
  axiom_report rep;
  if (weights.size() != sp.size()) {
    rep.nonneg_ok = rep.normalized_ok = rep.additivity_ok = false;
    rep.witnesses.push_back("expected " + std::to_string(sp.size()) + " weights, got " +
                            std::to_string(weights.size()));
    return rep;
  }
  rational sum = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0) {
      rep.nonneg_ok = false;
      rep.witnesses.push_back("outcome '" + sp.label(i) + "' has negative weight " +
                              format_rational(weights[i]));
    }
    sum += weights[i];
  }
  if (sum != 1) {
    rep.normalized_ok = false;
    rep.witnesses.push_back("weights sum to " + format_rational(sum) + ", expected 1");
  }
  if (!rep.nonneg_ok || !rep.normalized_ok) return rep;

  auto m = probability_measure::unchecked(sp, std::vector<rational>(weights.begin(), weights.end()));
  auto check_pair = [&](const event& a, const event& b) {
    if (m.prob(a | b) != m.prob(a) + m.prob(b)) {
      rep.additivity_ok = false;
      rep.witnesses.push_back("P(A∪B) != P(A)+P(B) for A=" + describe(sp, a) +
                              ", B=" + describe(sp, b));
      return false;
    }
    return true;
  };
  if (sp.size() <= 6) {
    std::size_t n = std::size_t{1} << sp.size();
    for (std::size_t am = 0; am < n; ++am)
      for (std::size_t bm = 0; bm < n; ++bm) {
        if (am & bm) continue;
        event a = sp.event_from_mask(bitmask(sp.size(), am));
        event b = sp.event_from_mask(bitmask(sp.size(), bm));
        if (!check_pair(a, b)) return rep;
      }
  } else {
    std::mt19937_64 rng(0x5eed);
    for (int t = 0; t < 256; ++t) {
      bitmask am(sp.size()), bm(sp.size());
      for (std::size_t i = 0; i < sp.size(); ++i) {
        switch (rng() % 3) {
          case 0: am.set(i); break;
          case 1: bm.set(i); break;
          default: break;
        }
      }
      if (!check_pair(sp.event_from_mask(am), sp.event_from_mask(bm))) return rep;
    }
  }
  return rep;
}

inline axiom_report validate_measure(const sample_space& sp, const probability_measure& m) {
  if (m.space_id() != sp.id())
    throw error(errc::space_mismatch, "measure belongs to a different space");
  return validate_weights(sp, m.weights());
}

// Audits an externally claimed event -> probability table against the
// axioms: nonnegativity per entry, P(Ω) = 1 when the table lists Ω, and
// additivity on every disjoint pair whose union the table also lists.
inline axiom_report audit_event_table(
    const sample_space& sp, std::span<const std::pair<event, rational>> table) {
  axiom_report rep;
  for (const auto& [e, p] : table) {
    if (e.space_id() != sp.id())
      throw error(errc::space_mismatch, "table event from a different space");
    if (p < 0) {
      rep.nonneg_ok = false;
      rep.witnesses.push_back("P(" + describe(sp, e) + ") = " + format_rational(p) + " < 0");
    }
  }
  auto lookup = [&](const bitmask& m) -> const rational* {
    for (const auto& [e, p] : table)
      if (e.mask() == m) return &p;
    return nullptr;
  };
  bitmask full(sp.size());
  full.set();
  if (const rational* p = lookup(full); p && *p != 1) {
    rep.normalized_ok = false;
    rep.witnesses.push_back("P(Ω) = " + format_rational(*p) + ", expected 1");
  }
  for (std::size_t i = 0; i < table.size(); ++i)
    for (std::size_t j = i + 1; j < table.size(); ++j) {
      const auto& [a, pa] = table[i];
      const auto& [b, pb] = table[j];
      if ((a.mask() & b.mask()).any()) continue;
      if (const rational* pu = lookup(a.mask() | b.mask()); pu && *pu != pa + pb) {
        rep.additivity_ok = false;
        rep.witnesses.push_back("P(A∪B) = " + format_rational(*pu) + " but P(A)+P(B) = " +
                                format_rational(pa + pb) + " for A=" + describe(sp, a) +
                                ", B=" + describe(sp, b));
      }
    }
  return rep;
}

// P(Ā) = 1 - P(A).
inline rational complement_prob(const probability_measure& m, const event& a) {
  return rational(1) - m.prob(a);
}

// P(A∪B) via P(A) + P(B) - P(A∩B).
inline rational union_prob_pair(const probability_measure& m, const event& a, const event& b) {
  return m.prob(a) + m.prob(b) - m.prob(a & b);
}

struct inclusion_exclusion_result {
  rational total;
  // layers[k-1] is the signed layer (-1)^{k-1} Σ_{|S|=k} P(⋂_{i∈S} A_i).
  std::vector<rational> layers;
};

inline constexpr std::size_t default_inclusion_exclusion_cap = 20;

// Alternating-sign expansion of P(⋃ A_i) over all 2^n - 1 nonempty index
// subsets, iterated in increasing mask order; each subset's intersection
// reuses the cached intersection of the subset without its lowest index.
inline inclusion_exclusion_result inclusion_exclusion(
    const probability_measure& m, std::span<const event> events,
    std::size_t cap = default_inclusion_exclusion_cap) {
  require_one_space(events);
  if (events[0].space_id() != m.space_id())
    throw error(errc::space_mismatch, "events belong to a different space");
  const std::size_t n = events.size();
  if (n > cap)
    throw error(errc::size_limit,
                "inclusion-exclusion over " + std::to_string(n) + " events exceeds cap " +
                    std::to_string(cap));

  inclusion_exclusion_result res;
  res.layers.assign(n, rational(0));
  std::vector<bitmask> inter(std::size_t{1} << n);
  for (std::size_t s = 1; s < inter.size(); ++s) {
    std::size_t low = s & (~s + 1);
    std::size_t idx = 0;
    while ((std::size_t{1} << idx) != low) ++idx;
    std::size_t rest = s & (s - 1);
    inter[s] = rest ? (inter[rest] & events[idx].mask()) : events[idx].mask();
    int card = std::popcount(s);
    rational term = m.prob(event(m.space_id(), inter[s]));
    if (card % 2 == 1)
      res.layers[card - 1] += term;
    else
      res.layers[card - 1] -= term;
  }
  res.total = 0;
  for (const auto& l : res.layers) res.total += l;
  return res;
}

// Σ P(A_i) for a pairwise disjoint family; equals P(⋃ A_i).
inline rational disjoint_union_prob(const probability_measure& m, std::span<const event> events) {
  require_one_space(events);
  if (events[0].space_id() != m.space_id())
    throw error(errc::space_mismatch, "events belong to a different space");
  for (std::size_t i = 0; i < events.size(); ++i)
    for (std::size_t j = i + 1; j < events.size(); ++j)
      if ((events[i].mask() & events[j].mask()).any())
        throw error(errc::not_disjoint, "events at positions " + std::to_string(i) + " and " +
                                            std::to_string(j) + " overlap");
  rational sum = 0;
  for (const auto& e : events) sum += m.prob(e);
  return sum;
}

}  // namespace probkit
