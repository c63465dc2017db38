#pragma once

#include <boost/dynamic_bitset.hpp>

#include <atomic>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "probkit/errors.hpp"

namespace probkit {

using bitmask = boost::dynamic_bitset<>;

class event;

// Finite ordered set of labelled outcomes. Outcome order is fixed at
// construction. Every space gets a fresh identity token; copies keep it,
// so events stay usable across copies of the same space.
class sample_space {
 public:
  explicit sample_space(std::vector<std::string> outcomes)
      : outcomes_(std::move(outcomes)), id_(next_id()) {
    if (outcomes_.empty())
      throw error(errc::invalid_weight, "sample space needs at least one outcome");
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
      if (outcomes_[i].empty())
        throw error(errc::duplicate_name, "outcome labels must be nonempty");
      if (!index_.emplace(outcomes_[i], i).second)
        throw error(errc::duplicate_name, "duplicate outcome label '" + outcomes_[i] + "'");
    }
  }

  std::uint64_t id() const { return id_; }
  std::size_t size() const { return outcomes_.size(); }
  const std::string& label(std::size_t i) const { return outcomes_[i]; }
  const std::vector<std::string>& labels() const { return outcomes_; }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  event make_event(const std::vector<std::string>& labels) const;
  event event_from_mask(bitmask mask) const;
  event empty_event() const;
  event full_event() const;
  event singleton(std::size_t i) const;

 private:
  static std::uint64_t next_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
  }

  std::vector<std::string> outcomes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t id_;
};

// Subset of a sample space, one membership bit per outcome in space order.
class event {
 public:
  event(std::uint64_t space_id, bitmask mask) : space_id_(space_id), mask_(std::move(mask)) {}

  std::uint64_t space_id() const { return space_id_; }
  const bitmask& mask() const { return mask_; }
  std::size_t size() const { return mask_.size(); }
  std::size_t count() const { return mask_.count(); }
  bool test(std::size_t i) const { return mask_.test(i); }
  bool is_empty() const { return mask_.none(); }
  bool is_full() const { return mask_.all(); }

  bool operator==(const event& o) const {
    return space_id_ == o.space_id_ && mask_ == o.mask_;
  }
  bool operator!=(const event& o) const { return !(*this == o); }

  // Subset relation (this ⊆ other).
  bool subset_of(const event& o) const {
    require_same_space(*this, o);
    return mask_.is_subset_of(o.mask_);
  }

  friend event operator|(const event& a, const event& b) {
    require_same_space(a, b);
    return event(a.space_id_, a.mask_ | b.mask_);
  }
  friend event operator&(const event& a, const event& b) {
    require_same_space(a, b);
    return event(a.space_id_, a.mask_ & b.mask_);
  }
  friend event operator~(const event& a) { return event(a.space_id_, ~a.mask_); }

  static void require_same_space(const event& a, const event& b) {
    if (a.space_id_ != b.space_id_)
      throw error(errc::space_mismatch, "events belong to different sample spaces");
  }

 private:
  std::uint64_t space_id_;
  bitmask mask_;
};

inline event sample_space::event_from_mask(bitmask mask) const {
  if (mask.size() != size())
    throw error(errc::space_mismatch, "mask length does not match outcome count");
  return event(id_, std::move(mask));
}

inline event sample_space::make_event(const std::vector<std::string>& labels) const {
  bitmask m(size());
  for (const auto& l : labels) {
    auto i = index_of(l);
    if (!i) throw error(errc::unknown_name, "unknown outcome '" + l + "'");
    m.set(*i);
  }
  return event(id_, std::move(m));
}

inline event sample_space::empty_event() const { return event(id_, bitmask(size())); }

inline event sample_space::full_event() const {
  bitmask m(size());
  m.set();
  return event(id_, std::move(m));
}

inline event sample_space::singleton(std::size_t i) const {
  if (i >= size()) throw error(errc::index_out_of_range, "outcome index out of range");
  bitmask m(size());
  m.set(i);
  return event(id_, std::move(m));
}

// Renders an event as "{a,b,c}" using the space's labels.
inline std::string describe(const sample_space& sp, const event& e) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    if (!e.test(i)) continue;
    if (!first) out += ",";
    out += sp.label(i);
    first = false;
  }
  out += "}";
  return out;
}

inline bool is_pme(const event& a, const event& b) {
  event::require_same_space(a, b);
  return (a.mask() & b.mask()).none();
}

inline void require_one_space(std::span<const event> events) {
  if (events.empty()) throw error(errc::empty_family, "family of events is empty");
  for (std::size_t i = 1; i < events.size(); ++i)
    event::require_same_space(events[0], events[i]);
}

// Family-level mutual exclusivity: every unordered pair is disjoint.
inline bool is_pme_family(std::span<const event> events) {
  require_one_space(events);
  for (std::size_t i = 0; i < events.size(); ++i)
    for (std::size_t j = i + 1; j < events.size(); ++j)
      if ((events[i].mask() & events[j].mask()).any()) return false;
  return true;
}

// Disjoint family covering the whole space. Empty blocks are permitted.
inline bool is_partition(std::span<const event> events) {
  if (!is_pme_family(events)) return false;
  bitmask u(events[0].size());
  for (const auto& e : events) u |= e.mask();
  return u.all();
}

// Collection of events containing the full space, closed under complement
// and pairwise union.
class sigma_algebra {
 public:
  sigma_algebra(std::uint64_t space_id, std::size_t ground_size, std::set<bitmask> members)
      : space_id_(space_id), ground_size_(ground_size), members_(std::move(members)) {}

  std::uint64_t space_id() const { return space_id_; }
  std::size_t ground_size() const { return ground_size_; }
  std::size_t member_count() const { return members_.size(); }
  const std::set<bitmask>& members() const { return members_; }

  bool contains(const event& e) const {
    return e.space_id() == space_id_ && members_.count(e.mask()) > 0;
  }

  std::vector<event> events() const {
    std::vector<event> out;
    out.reserve(members_.size());
    for (const auto& m : members_) out.emplace_back(space_id_, m);
    return out;
  }

 private:
  std::uint64_t space_id_;
  std::size_t ground_size_;
  std::set<bitmask> members_;
};

inline constexpr std::size_t default_sigma_member_cap = std::size_t{1} << 20;

// Smallest sigma-algebra containing the generators, by saturation: start
// from {∅, Ω} ∪ generators, keep adding complements and pairwise unions
// until nothing new appears. For finite spaces this reaches the same
// closure as the countable-union definition.
inline sigma_algebra generate_sigma_algebra(const sample_space& sp,
                                            std::span<const event> generators,
                                            std::size_t member_cap = default_sigma_member_cap) {
  for (const auto& g : generators)
    if (g.space_id() != sp.id())
      throw error(errc::space_mismatch, "generator from a different space");

  std::set<bitmask> members;
  bitmask empty(sp.size());
  bitmask full(sp.size());
  full.set();
  members.insert(empty);
  members.insert(full);
  for (const auto& g : generators) members.insert(g.mask());

  auto check_cap = [&] {
    if (members.size() > member_cap)
      throw error(errc::size_limit, "sigma-algebra closure exceeds member cap of " +
                                        std::to_string(member_cap));
  };
  check_cap();

  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<bitmask> snapshot(members.begin(), members.end());
    for (const auto& m : snapshot)
      if (members.insert(~m).second) {
        grew = true;
        check_cap();
      }
    for (std::size_t i = 0; i < snapshot.size(); ++i)
      for (std::size_t j = i + 1; j < snapshot.size(); ++j)
        if (members.insert(snapshot[i] | snapshot[j]).second) {
          grew = true;
          check_cap();
        }
  }
  return sigma_algebra(sp.id(), sp.size(), std::move(members));
}

struct sigma_check_result {
  bool ok = true;
  std::string violation;  // first violated property plus a witness
};

// Checks the three defining properties (full-space membership, complement
// closure, finite union closure) and names the first violation found.
inline sigma_check_result is_sigma_algebra(const sample_space& sp,
                                           std::span<const event> members) {
  for (const auto& m : members)
    if (m.space_id() != sp.id())
      throw error(errc::space_mismatch, "member from a different space");

  std::set<bitmask> set;
  for (const auto& m : members) set.insert(m.mask());

  bitmask full(sp.size());
  full.set();
  if (!set.count(full))
    return {false, "full space " + describe(sp, sp.full_event()) + " is not a member"};

  for (const auto& m : set)
    if (!set.count(~m))
      return {false, "complement of " + describe(sp, event(sp.id(), m)) + " is missing"};

  std::vector<bitmask> v(set.begin(), set.end());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (!set.count(v[i] | v[j]))
        return {false, "union of " + describe(sp, event(sp.id(), v[i])) + " and " +
                           describe(sp, event(sp.id(), v[j])) + " is missing"};

  return {};
}

}  // namespace probkit
