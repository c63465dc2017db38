#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "probkit/errors.hpp"
#include "probkit/event_algebra.hpp"
#include "probkit/measure.hpp"
#include "probkit/rational.hpp"

namespace probkit {

// P(A|B) = P(A∩B)/P(B), defined only for P(B) > 0.
inline rational cond_prob(const probability_measure& m, const event& a, const event& b) {
  event::require_same_space(a, b);
  rational pb = m.prob(b);
  if (pb == 0)
    throw error(errc::condition_on_null, "conditioning event has probability 0");
  return m.prob(a & b) / pb;
}

struct chain_rule_result {
  rational value;
  std::vector<rational> factors;  // P(A1), P(A2|A1), ...
};

// P(A1)·P(A2|A1)·…·P(An|A1∩…∩A_{n-1}); every proper prefix intersection
// must have positive probability.
inline chain_rule_result chain_rule(const probability_measure& m, std::span<const event> events) {
  require_one_space(events);
  chain_rule_result res;
  res.value = 1;
  event prefix = events[0];
  res.factors.push_back(m.prob(events[0]));
  res.value = res.factors[0];
  for (std::size_t i = 1; i < events.size(); ++i) {
    rational pp = m.prob(prefix);
    if (pp == 0)
      throw error(errc::prefix_null,
                  "prefix intersection of the first " + std::to_string(i) +
                      " events has probability 0");
    rational factor = m.prob(prefix & events[i]) / pp;
    res.factors.push_back(factor);
    res.value *= factor;
    prefix = prefix & events[i];
  }
  return res;
}

// Decided by the symmetric product identity P(A∩B) = P(A)P(B); agrees
// with the conditional form P(A|B) = P(A) whenever P(B) > 0.
inline bool is_independent(const probability_measure& m, const event& a, const event& b) {
  event::require_same_space(a, b);
  return m.prob(a & b) == m.prob(a) * m.prob(b);
}

struct mutual_independence_result {
  bool ok = true;
  std::vector<std::size_t> violating_subset;  // lexicographically first, when !ok
};

// Product identity for every index subset of size >= 2, exhaustively.
inline mutual_independence_result is_mutually_independent(const probability_measure& m,
                                                          std::span<const event> events,
                                                          std::size_t cap = 20) {
  require_one_space(events);
  const std::size_t n = events.size();
  if (n < 2) throw error(errc::empty_family, "mutual independence needs at least 2 events");
  if (n > cap)
    throw error(errc::size_limit, "mutual independence over " + std::to_string(n) +
                                      " events exceeds cap " + std::to_string(cap));

  // Enumerate subsets so that smaller lexicographic index sequences come
  // first: recurse on sorted index prefixes.
  mutual_independence_result res;
  std::vector<std::size_t> chosen;
  auto check = [&](const std::vector<std::size_t>& idx) {
    event inter = events[idx[0]];
    rational product = m.prob(events[idx[0]]);
    for (std::size_t k = 1; k < idx.size(); ++k) {
      inter = inter & events[idx[k]];
      product *= m.prob(events[idx[k]]);
    }
    return m.prob(inter) == product;
  };
  // Depth-first over increasing index sequences yields lexicographic order.
  std::vector<std::size_t> stack;
  std::function<bool(std::size_t)> dfs = [&](std::size_t start) -> bool {
    for (std::size_t i = start; i < n; ++i) {
      stack.push_back(i);
      if (stack.size() >= 2 && !check(stack)) {
        res.ok = false;
        res.violating_subset = stack;
        return false;
      }
      if (!dfs(i + 1)) return false;
      stack.pop_back();
    }
    return true;
  };
  dfs(0);
  return res;
}

struct total_probability_result {
  rational value;
  std::vector<rational> terms;  // P(A|C_i)·P(C_i) per block
};

// Σ P(A|C_i)P(C_i) over a partition; zero-probability blocks contribute
// an exact 0 term (read as P(A∩C_i)).
inline total_probability_result total_probability(const probability_measure& m, const event& a,
                                                  std::span<const event> partition) {
  if (!is_partition(partition))
    throw error(errc::not_a_partition, "blocks do not form a partition of the space");
  total_probability_result res;
  res.value = 0;
  for (const auto& block : partition) {
    rational pc = m.prob(block);
    rational term = pc == 0 ? rational(0) : cond_prob(m, a, block) * pc;
    res.terms.push_back(term);
    res.value += term;
  }
  return res;
}

// Posterior of block i: P(A|C_i)P(C_i) / Σ_j P(A|C_j)P(C_j).
inline rational bayes(const probability_measure& m, std::size_t i, const event& a,
                      std::span<const event> partition) {
  if (!is_partition(partition))
    throw error(errc::not_a_partition, "blocks do not form a partition of the space");
  if (i >= partition.size())
    throw error(errc::index_out_of_range, "block index " + std::to_string(i) +
                                              " out of range for " +
                                              std::to_string(partition.size()) + " blocks");
  auto tp = total_probability(m, a, partition);
  if (tp.value == 0) throw error(errc::evidence_null, "evidence P(A) is 0");
  rational pc = m.prob(partition[i]);
  if (pc == 0) throw error(errc::condition_on_null, "selected block has probability 0");
  return tp.terms[i] / tp.value;
}

struct bayes_table {
  std::vector<rational> priors;
  std::vector<rational> likelihoods;
};

// Purely numeric Bayes: posterior_i = prior_i·likelihood_i / evidence.
inline std::vector<rational> bayes_posteriors(const bayes_table& t) {
  if (t.priors.size() != t.likelihoods.size())
    throw error(errc::length_mismatch, "priors and likelihoods differ in length");
  if (t.priors.empty()) throw error(errc::empty_family, "empty Bayes table");
  rational prior_sum = 0;
  for (const auto& p : t.priors) {
    if (p < 0) throw error(errc::invalid_prior, "negative prior " + format_rational(p));
    prior_sum += p;
  }
  if (prior_sum != 1)
    throw error(errc::invalid_prior,
                "priors sum to " + format_rational(prior_sum) + ", expected 1");
  for (const auto& l : t.likelihoods)
    if (l < 0 || l > 1)
      throw error(errc::invalid_weight, "likelihood " + format_rational(l) + " outside [0,1]");
  rational evidence = 0;
  for (std::size_t i = 0; i < t.priors.size(); ++i) evidence += t.priors[i] * t.likelihoods[i];
  if (evidence == 0) throw error(errc::evidence_null, "evidence Σ P(A|C_i)P(C_i) is 0");
  std::vector<rational> post;
  post.reserve(t.priors.size());
  for (std::size_t i = 0; i < t.priors.size(); ++i)
    post.push_back(t.priors[i] * t.likelihoods[i] / evidence);
  return post;
}

// Two-column text form, one "prior,likelihood" row per line. Blank lines
// and '#' comments are skipped.
inline bayes_table parse_bayes_table(const std::string& text) {
  bayes_table t;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    ++line_no;
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw syntax_error({line_no, 1}, "expected 'prior,likelihood'");
    try {
      t.priors.push_back(parse_rational(strip(line.substr(0, comma))));
      t.likelihoods.push_back(parse_rational(strip(line.substr(comma + 1))));
    } catch (const std::invalid_argument& ex) {
      throw syntax_error({line_no, 1}, std::string("bad rational: ") + ex.what());
    }
  }
  if (t.priors.empty()) throw error(errc::empty_family, "empty Bayes table");
  return t;
}

// Σ P(A_i|B) over a disjoint family; equals P(⋃ A_i | B).
inline rational cond_addition(const probability_measure& m, std::span<const event> events,
                              const event& b) {
  require_one_space(events);
  for (std::size_t i = 0; i < events.size(); ++i)
    for (std::size_t j = i + 1; j < events.size(); ++j)
      if ((events[i].mask() & events[j].mask()).any())
        throw error(errc::not_disjoint, "events at positions " + std::to_string(i) + " and " +
                                            std::to_string(j) + " overlap");
  if (m.prob(b) == 0)
    throw error(errc::condition_on_null, "conditioning event has probability 0");
  rational sum = 0;
  for (const auto& e : events) sum += cond_prob(m, e, b);
  return sum;
}

}  // namespace probkit
