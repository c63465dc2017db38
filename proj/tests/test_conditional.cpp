#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "probkit/conditional.hpp"

using namespace probkit;

namespace {

sample_space die() { return sample_space({"1", "2", "3", "4", "5", "6"}); }

probability_measure fair(const sample_space& sp) {
  return probability_measure(sp, std::vector<rational>(sp.size(), rational(1, sp.size())));
}

std::vector<event> all_events(const sample_space& sp) {
  std::vector<event> out;
  for (std::size_t m = 0; m < (std::size_t{1} << sp.size()); ++m)
    out.push_back(sp.event_from_mask(bitmask(sp.size(), m)));
  return out;
}

}  // namespace

TEST_CASE("conditional probability on the die") {
  auto sp = die();
  auto m = fair(sp);
  event a = sp.make_event({"2", "4", "6"});
  event b = sp.make_event({"1", "2", "3"});
  CHECK(cond_prob(m, a, b) == rational(1, 3));

  event odd = sp.make_event({"1", "3", "5"});
  CHECK(cond_prob(m, a, odd) == 0);  // disjoint

  event sub = sp.make_event({"2", "4"});
  CHECK(cond_prob(m, a, sub) == 1);  // condition implies the event

  CHECK_THROWS_AS(cond_prob(m, a, sp.empty_event()), error);
  try {
    cond_prob(m, a, sp.empty_event());
  } catch (const error& e) {
    CHECK(e.code() == errc::condition_on_null);
  }
}

TEST_CASE("chain rule") {
  auto sp = die();
  auto m = fair(sp);
  std::vector<event> chain{sp.make_event({"1", "2", "3", "4"}), sp.make_event({"2", "3", "4"}),
                           sp.make_event({"3", "4"})};
  auto res = chain_rule(m, chain);
  REQUIRE(res.factors.size() == 3);
  CHECK(res.factors[0] == rational(2, 3));
  CHECK(res.factors[1] == rational(3, 4));
  CHECK(res.factors[2] == rational(2, 3));
  CHECK(res.value == rational(1, 3));
  CHECK(res.value == m.prob(chain[0] & chain[1] & chain[2]));

  std::vector<event> single{sp.make_event({"5"})};
  CHECK(chain_rule(m, single).value == rational(1, 6));

  // empty running intersection is fine as a *final* step
  std::vector<event> vanish{sp.make_event({"1", "2"}), sp.make_event({"5", "6"})};
  auto v = chain_rule(m, vanish);
  CHECK(v.factors[1] == 0);
  CHECK(v.value == 0);

  // but a zero-probability proper prefix is an error
  std::vector<event> dead{sp.empty_event(), sp.make_event({"1"})};
  CHECK_THROWS_AS(chain_rule(m, dead), error);
  try {
    chain_rule(m, dead);
  } catch (const error& e) {
    CHECK(e.code() == errc::prefix_null);
  }
}

TEST_CASE("pairwise independence on two fair coins") {
  sample_space sp({"HH", "HT", "TH", "TT"});
  auto m = fair(sp);
  event first_h = sp.make_event({"HH", "HT"});
  event second_h = sp.make_event({"HH", "TH"});
  CHECK(is_independent(m, first_h, second_h));

  auto d = die();
  auto md = fair(d);
  event evens = d.make_event({"2", "4", "6"});
  event odds = d.make_event({"1", "3", "5"});
  CHECK_FALSE(is_independent(md, evens, odds));  // disjoint with positive probs

  for (const auto& a : all_events(d)) CHECK(is_independent(md, a, d.full_event()));
}

TEST_CASE("mutual independence and the XOR counterexample") {
  sample_space sp({"00", "01", "10", "11"});
  auto m = fair(sp);
  event a = sp.make_event({"10", "11"});  // first bit 1
  event b = sp.make_event({"01", "11"});  // second bit 1
  event c = sp.make_event({"01", "10"});  // bits differ

  CHECK(is_independent(m, a, b));
  CHECK(is_independent(m, a, c));
  CHECK(is_independent(m, b, c));

  std::vector<event> fam{a, b, c};
  auto res = is_mutually_independent(m, fam);
  CHECK_FALSE(res.ok);
  CHECK(res.violating_subset == std::vector<std::size_t>{0, 1, 2});

  std::vector<event> with_full{a, b, sp.full_event()};
  CHECK(is_mutually_independent(m, with_full).ok);

  std::vector<event> pair{a, b};
  CHECK(is_mutually_independent(m, pair).ok);

  std::vector<event> one{a};
  CHECK_THROWS_AS(is_mutually_independent(m, one), error);
  std::vector<event> many(21, a);
  CHECK_THROWS_AS(is_mutually_independent(m, many), error);
}

TEST_CASE("total probability") {
  auto sp = die();
  auto m = fair(sp);
  event a = sp.make_event({"2", "4", "6"});
  std::vector<event> part{sp.make_event({"1", "2"}), sp.make_event({"3", "4"}),
                          sp.make_event({"5", "6"})};
  auto res = total_probability(m, a, part);
  REQUIRE(res.terms.size() == 3);
  for (const auto& t : res.terms) CHECK(t == rational(1, 6));
  CHECK(res.value == rational(1, 2));
  CHECK(res.value == m.prob(a));

  std::vector<event> trivial{sp.full_event()};
  CHECK(total_probability(m, a, trivial).value == m.prob(a));
  CHECK(total_probability(m, sp.full_event(), part).value == 1);

  // zero-probability blocks contribute an exact 0 term
  sample_space s2({"a", "b"});
  probability_measure m2(s2, {rational(1), rational(0)});
  std::vector<event> split{s2.make_event({"a"}), s2.make_event({"b"})};
  auto z = total_probability(m2, s2.make_event({"a"}), split);
  CHECK(z.terms[1] == 0);
  CHECK(z.value == 1);

  std::vector<event> not_part{sp.make_event({"1", "2"}), sp.make_event({"2", "3"})};
  CHECK_THROWS_AS(total_probability(m, a, not_part), error);
}

TEST_CASE("bayes over a partition") {
  auto sp = die();
  auto m = fair(sp);
  event a = sp.make_event({"1", "2", "3"});
  std::vector<event> part{sp.make_event({"1", "2"}), sp.make_event({"3", "4"}),
                          sp.make_event({"5", "6"})};
  CHECK(bayes(m, 0, a, part) == rational(2, 3));
  CHECK(bayes(m, 0, a, part) == cond_prob(m, part[0], a));

  std::vector<event> trivial{sp.full_event()};
  CHECK(bayes(m, 0, a, trivial) == 1);

  rational post_sum = 0;
  for (std::size_t i = 0; i < part.size(); ++i) {
    if (m.prob(part[i]) == 0) continue;
    post_sum += bayes(m, i, a, part);
  }
  CHECK(post_sum == 1);

  CHECK_THROWS_AS(bayes(m, 3, a, part), error);
  CHECK_THROWS_AS(bayes(m, 0, sp.empty_event(), part), error);
  try {
    bayes(m, 0, sp.empty_event(), part);
  } catch (const error& e) {
    CHECK(e.code() == errc::evidence_null);
  }
}

TEST_CASE("numeric bayes table") {
  bayes_table t{{rational(1, 2), rational(1, 2)}, {rational(1, 3), rational(2, 3)}};
  auto post = bayes_posteriors(t);
  REQUIRE(post.size() == 2);
  CHECK(post[0] == rational(1, 3));
  CHECK(post[1] == rational(2, 3));

  bayes_table flat{{rational(1, 4), rational(3, 4)}, {rational(1, 2), rational(1, 2)}};
  auto same = bayes_posteriors(flat);
  CHECK(same[0] == rational(1, 4));
  CHECK(same[1] == rational(3, 4));

  bayes_table degenerate{{rational(1), rational(0)}, {rational(1, 2), rational(1, 2)}};
  auto d = bayes_posteriors(degenerate);
  CHECK(d[0] == 1);
  CHECK(d[1] == 0);

  bayes_table bad_len{{rational(1)}, {rational(1, 2), rational(1, 2)}};
  CHECK_THROWS_AS(bayes_posteriors(bad_len), error);
  bayes_table bad_prior{{rational(1, 2), rational(1, 4)}, {rational(1, 2), rational(1, 2)}};
  CHECK_THROWS_AS(bayes_posteriors(bad_prior), error);
  bayes_table zero_evidence{{rational(1, 2), rational(1, 2)}, {rational(0), rational(0)}};
  CHECK_THROWS_AS(bayes_posteriors(zero_evidence), error);
}

TEST_CASE("bayes table csv parsing") {
  auto t = parse_bayes_table("1/2,1/3\n1/2,2/3\n");
  REQUIRE(t.priors.size() == 2);
  CHECK(t.priors[0] == rational(1, 2));
  CHECK(t.likelihoods[1] == rational(2, 3));

  auto with_comments = parse_bayes_table("# header\n1/2, 1/3\n\n1/2, 2/3 # tail\n");
  CHECK(with_comments.priors.size() == 2);

  CHECK_THROWS_AS(parse_bayes_table("1/2\n"), syntax_error);
  CHECK_THROWS_AS(parse_bayes_table("x,y\n"), syntax_error);
  CHECK_THROWS_AS(parse_bayes_table("\n"), error);
}

TEST_CASE("conditional addition") {
  auto sp = die();
  auto m = fair(sp);
  event b = sp.make_event({"1", "2", "3"});
  std::vector<event> fam{sp.make_event({"1"}), sp.make_event({"2"})};
  CHECK(cond_addition(m, fam, b) == rational(2, 3));
  CHECK(cond_addition(m, fam, b) == cond_prob(m, fam[0] | fam[1], b));

  std::vector<event> part{sp.make_event({"1", "2"}), sp.make_event({"3", "4"}),
                          sp.make_event({"5", "6"})};
  CHECK(cond_addition(m, part, b) == 1);

  std::vector<event> single{sp.make_event({"2"})};
  CHECK(cond_addition(m, single, b) == cond_prob(m, single[0], b));

  std::vector<event> overlap{sp.make_event({"1", "2"}), sp.make_event({"2", "3"})};
  CHECK_THROWS_AS(cond_addition(m, overlap, b), error);
  CHECK_THROWS_AS(cond_addition(m, fam, sp.empty_event()), error);
}

TEST_CASE("conditional identities, exhaustive on small spaces") {
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
    sample_space sp(labels);
    big_int total = big_int(n) * (big_int(n) + 1) / 2;
    std::vector<rational> w;
    for (std::size_t i = 1; i <= n; ++i) w.emplace_back(big_int(i), total);
    probability_measure m(sp, w);
    auto events = all_events(sp);
    for (const auto& a : events)
      for (const auto& b : events) {
        if (m.prob(b) == 0) continue;
        rational c = cond_prob(m, a, b);
        CHECK(c >= 0);
        CHECK(c <= 1);
        CHECK(m.prob(a & b) <= m.prob(b));
        if (is_pme(a, b)) CHECK(c == 0);
        if (b.subset_of(a)) CHECK(c == 1);
        if (is_independent(m, a, b) && m.prob(a) > 0) {
          CHECK(c == m.prob(a));
          CHECK(cond_prob(m, b, a) == m.prob(b));
          CHECK_FALSE(is_pme(a, b));
        }
      }
  }
}
