#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "probkit/event_algebra.hpp"

using namespace probkit;

namespace {

sample_space die() { return sample_space({"1", "2", "3", "4", "5", "6"}); }

// All events of a space, by mask value.
std::vector<event> all_events(const sample_space& sp) {
  std::vector<event> out;
  for (std::size_t m = 0; m < (std::size_t{1} << sp.size()); ++m)
    out.push_back(sp.event_from_mask(bitmask(sp.size(), m)));
  return out;
}

event random_event(const sample_space& sp, std::mt19937_64& rng) {
  bitmask m(sp.size());
  for (std::size_t i = 0; i < sp.size(); ++i)
    if (rng() & 1) m.set(i);
  return sp.event_from_mask(m);
}

}  // namespace

TEST_CASE("sample space construction rules") {
  CHECK_THROWS_AS(sample_space({}), error);
  CHECK_THROWS_AS(sample_space({"a", "a"}), error);
  CHECK_THROWS_AS(sample_space({"a", ""}), error);
  sample_space sp({"a", "b"});
  CHECK(sp.size() == 2);
  CHECK(sp.index_of("b") == 1);
  CHECK_FALSE(sp.index_of("c").has_value());
}

TEST_CASE("set operations on the die") {
  auto sp = die();
  event a = sp.make_event({"2", "4", "6"});
  event b = sp.make_event({"1", "2", "3"});
  CHECK((a | b) == sp.make_event({"1", "2", "3", "4", "6"}));
  CHECK((a & b) == sp.make_event({"2"}));
  CHECK(~~a == a);
  CHECK((a | ~a) == sp.full_event());
  CHECK((a & ~a) == sp.empty_event());
}

TEST_CASE("empty and full identities") {
  auto sp = die();
  event b = sp.make_event({"1", "2", "3"});
  event e = sp.empty_event();
  event f = sp.full_event();
  CHECK((e | b) == b);
  CHECK((e & b) == e);
  CHECK((f | b) == f);
  CHECK((f & b) == b);
}

TEST_CASE("cross-space operations fail loudly") {
  auto s1 = die();
  auto s2 = die();
  event a = s1.make_event({"1"});
  event b = s2.make_event({"1"});
  CHECK_THROWS_AS(a | b, error);
  CHECK_THROWS_AS(a & b, error);
  CHECK_THROWS_AS(is_pme(a, b), error);
  // a copy of a space keeps its identity
  sample_space s1_copy = s1;
  CHECK_NOTHROW(a | s1_copy.make_event({"2"}));
}

TEST_CASE("pairwise mutual exclusivity") {
  auto sp = die();
  event evens = sp.make_event({"2", "4", "6"});
  event odds = sp.make_event({"1", "3", "5"});
  event low = sp.make_event({"1", "2", "3"});
  CHECK(is_pme(evens, odds));
  CHECK_FALSE(is_pme(evens, low));
  for (const auto& e : all_events(sp)) CHECK(is_pme(e, sp.empty_event()));
}

TEST_CASE("pme family and the n-wise counterexample") {
  auto sp = die();
  std::vector<event> fam{sp.make_event({"1", "2"}), sp.make_event({"3", "4"}),
                         sp.make_event({"5", "6"})};
  CHECK(is_pme_family(fam));

  sample_space s3({"1", "2", "3"});
  // triple intersection empty, but pairs overlap
  std::vector<event> tricky{s3.make_event({"1", "2"}), s3.make_event({"2", "3"}),
                            s3.make_event({"1", "3"})};
  CHECK(((tricky[0] & tricky[1] & tricky[2]) == s3.empty_event()));
  CHECK_FALSE(is_pme_family(tricky));

  std::vector<event> singleton{sp.make_event({"1"})};
  CHECK(is_pme_family(singleton));
  CHECK_THROWS_AS(is_pme_family(std::vector<event>{}), error);
}

TEST_CASE("partitions") {
  auto sp = die();
  std::vector<event> parts{sp.make_event({"1", "2"}), sp.make_event({"3", "4"}),
                           sp.make_event({"5", "6"})};
  CHECK(is_partition(parts));

  std::vector<event> overlap{sp.make_event({"1", "2"}), sp.make_event({"2", "3"}),
                             sp.make_event({"4", "5", "6"})};
  CHECK_FALSE(is_partition(overlap));

  for (const auto& a : all_events(sp)) {
    std::vector<event> split{a, ~a};
    CHECK(is_partition(split));  // empty blocks permitted
  }

  std::vector<event> singles;
  for (std::size_t i = 0; i < sp.size(); ++i) singles.push_back(sp.singleton(i));
  CHECK(is_partition(singles));
}

TEST_CASE("de morgan and distributivity over random events") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 1 + rng() % 8;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
    sample_space sp(labels);
    event a = random_event(sp, rng);
    event b = random_event(sp, rng);
    event c = random_event(sp, rng);
    CHECK(~(a | b) == (~a & ~b));
    CHECK(~(a & b) == (~a | ~b));
    CHECK((a & (b | c)) == ((a & b) | (a & c)));
    CHECK((a | (b & c)) == ((a | b) & (a | c)));
    CHECK(((a | b) | c) == (a | (b | c)));
  }
}

TEST_CASE("sigma algebra generation on small spaces") {
  sample_space s3({"1", "2", "3"});
  std::vector<event> gens{s3.make_event({"1"})};
  auto alg = generate_sigma_algebra(s3, gens);
  CHECK(alg.member_count() == 4);
  CHECK(alg.contains(s3.empty_event()));
  CHECK(alg.contains(s3.full_event()));
  CHECK(alg.contains(s3.make_event({"1"})));
  CHECK(alg.contains(s3.make_event({"2", "3"})));

  auto trivial = generate_sigma_algebra(s3, std::vector<event>{});
  CHECK(trivial.member_count() == 2);

  std::vector<event> two{s3.make_event({"1"}), s3.make_event({"2"})};
  auto full = generate_sigma_algebra(s3, two);
  CHECK(full.member_count() == 8);  // whole power set
}

TEST_CASE("sigma algebra member cap") {
  std::vector<std::string> labels;
  for (int i = 0; i < 8; ++i) labels.push_back("x" + std::to_string(i));
  sample_space sp(labels);
  std::vector<event> gens;
  for (std::size_t i = 0; i < sp.size(); ++i) gens.push_back(sp.singleton(i));
  CHECK_THROWS_AS(generate_sigma_algebra(sp, gens, 16), error);
  CHECK_NOTHROW(generate_sigma_algebra(sp, gens, 256));
}

TEST_CASE("is_sigma_algebra reports the first violation") {
  sample_space s3({"1", "2", "3"});
  std::vector<event> good{s3.empty_event(), s3.make_event({"1"}), s3.make_event({"2", "3"}),
                          s3.full_event()};
  CHECK(is_sigma_algebra(s3, good).ok);

  std::vector<event> missing_complement{s3.empty_event(), s3.full_event(),
                                        s3.make_event({"1"})};
  auto res = is_sigma_algebra(s3, missing_complement);
  CHECK_FALSE(res.ok);
  CHECK(res.violation.find("complement of {1}") != std::string::npos);

  std::vector<event> no_full{s3.empty_event(), s3.make_event({"1"})};
  CHECK_FALSE(is_sigma_algebra(s3, no_full).ok);

  auto power_set = all_events(s3);
  CHECK(is_sigma_algebra(s3, power_set).ok);
}

TEST_CASE("generated algebras are minimal and power-of-two sized") {
  std::mt19937_64 rng(5);
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
    sample_space sp(labels);
    auto events = all_events(sp);

    // every closed collection over this space, by brute force
    std::vector<std::set<bitmask>> closed;
    std::size_t pow = std::size_t{1} << events.size();
    for (std::size_t pick = 0; pick < pow; ++pick) {
      std::vector<event> members;
      for (std::size_t i = 0; i < events.size(); ++i)
        if (pick & (std::size_t{1} << i)) members.push_back(events[i]);
      if (members.empty()) continue;
      if (!is_sigma_algebra(sp, members).ok) continue;
      std::set<bitmask> s;
      for (const auto& e : members) s.insert(e.mask());
      closed.push_back(std::move(s));
    }

    for (std::size_t gi = 0; gi < events.size(); ++gi)
      for (std::size_t gj = gi; gj < events.size(); ++gj) {
        std::vector<event> gens{events[gi], events[gj]};
        auto alg = generate_sigma_algebra(sp, gens);
        CHECK(is_sigma_algebra(sp, alg.events()).ok);
        CHECK((alg.member_count() & (alg.member_count() - 1)) == 0);

        // the generated algebra equals the smallest closed superset
        std::size_t best = SIZE_MAX;
        const std::set<bitmask>* best_set = nullptr;
        for (const auto& s : closed) {
          if (!s.count(events[gi].mask()) || !s.count(events[gj].mask())) continue;
          if (s.size() < best) {
            best = s.size();
            best_set = &s;
          }
        }
        REQUIRE(best_set != nullptr);
        CHECK(alg.members() == *best_set);
      }
  }
}
