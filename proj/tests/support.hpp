#pragma once

// Generators and brute-force oracles shared by the unit, property and
// acceptance tests. The oracles work on plain boolean matrices and subsets so
// they share no code with the library routines they check.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "specstruct.hpp"

namespace testsupport {

using specstruct::Mask;
using specstruct::Poset;
using specstruct::PropertyId;
using Edge = std::pair<std::size_t, std::size_t>;

inline std::string data_path(const std::string& file) {
  return std::string(SPECSTRUCT_DATA_DIR) + "/" + file;
}

inline specstruct::Workspace load(const std::vector<std::string>& files) {
  std::vector<std::filesystem::path> paths;
  for (const auto& f : files) paths.emplace_back(data_path(f));
  return specstruct::parse_files(paths);
}

inline specstruct::Workspace load_all() {
  return load({"road6.structure", "chain.structure", "graded_pair.structure", "counterexamples.structure",
               "refinement.structure", "axioms.structure", "profiles.profile",
               "game_structures.structure", "game1.scenario", "intersection.scenario"});
}

inline std::uint64_t seed_from_env(std::uint64_t fallback = 20240611) {
  if (const char* s = std::getenv("SPECSTRUCT_SEED")) return std::strtoull(s, nullptr, 10);
  return fallback;
}

inline std::vector<PropertyId> names(std::size_t n) {
  std::vector<PropertyId> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back("e" + std::to_string(i));
  return out;
}

// ---------------------------------------------------------------------------
// Boolean-matrix view of a strict order.

struct Order {
  std::size_t n = 0;
  std::vector<std::vector<bool>> lt;  // lt[a][b] : a < b

  explicit Order(std::size_t size) : n(size), lt(size, std::vector<bool>(size, false)) {}

  static Order of(const Poset& p) {
    Order o(p.size());
    for (std::size_t a = 0; a < o.n; ++a) {
      for (std::size_t b = 0; b < o.n; ++b) o.lt[a][b] = p.less(a, b);
    }
    return o;
  }

  bool comparable(std::size_t a, std::size_t b) const { return a == b || lt[a][b] || lt[b][a]; }
};

/// Transitive closure of `edges` on n nodes; nullopt on a cycle.
inline std::optional<Order> close(std::size_t n, const std::vector<Edge>& edges) {
  Order o(n);
  for (auto [a, b] : edges) o.lt[a][b] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (o.lt[i][k] && o.lt[k][j]) o.lt[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    if (o.lt[i][i]) return std::nullopt;
  return o;
}

inline std::set<Edge> cover_set(const Order& o) {
  std::set<Edge> out;
  for (std::size_t a = 0; a < o.n; ++a) {
    for (std::size_t b = 0; b < o.n; ++b) {
      if (!o.lt[a][b]) continue;
      bool direct = true;
      for (std::size_t c = 0; c < o.n && direct; ++c) direct = !(o.lt[a][c] && o.lt[c][b]);
      if (direct) out.insert({a, b});
    }
  }
  return out;
}

inline bool is_chain(const Order& o, Mask m) {
  for (std::size_t a = 0; a < o.n; ++a)
    for (std::size_t b = 0; b < o.n; ++b)
      if ((m >> a & 1) && (m >> b & 1) && !o.comparable(a, b)) return false;
  return true;
}

inline bool is_antichain(const Order& o, Mask m) {
  for (std::size_t a = 0; a < o.n; ++a)
    for (std::size_t b = 0; b < o.n; ++b)
      if (a != b && (m >> a & 1) && (m >> b & 1) && o.comparable(a, b)) return false;
  return true;
}

/// Maximal chains as subsets, by scanning every subset.
inline std::vector<Mask> brute_maximal_chains(const Order& o) {
  std::vector<Mask> out;
  const Mask all = (Mask{1} << o.n) - 1;
  for (Mask m = 1; m <= all; ++m) {
    if (!is_chain(o, m)) continue;
    bool maximal = true;
    for (std::size_t x = 0; x < o.n && maximal; ++x)
      if (!(m >> x & 1) && is_chain(o, m | Mask{1} << x)) maximal = false;
    if (maximal) out.push_back(m);
  }
  return out;
}

inline std::vector<Mask> brute_maximal_antichains(const Order& o) {
  std::vector<Mask> out;
  const Mask all = (Mask{1} << o.n) - 1;
  for (Mask m = 1; m <= all; ++m) {
    if (!is_antichain(o, m)) continue;
    bool maximal = true;
    for (std::size_t x = 0; x < o.n && maximal; ++x)
      if (!(m >> x & 1) && is_antichain(o, m | Mask{1} << x)) maximal = false;
    if (maximal) out.push_back(m);
  }
  return out;
}

inline bool brute_graded(const Order& o) {
  std::set<int> lengths;
  for (Mask c : brute_maximal_chains(o)) lengths.insert(std::popcount(c));
  return lengths.size() == 1;
}

/// Every partition of the elements into maximal antichains A_0..A_k-1 such
/// that a < b implies rank(a) < rank(b) and every maximal chain meets every
/// A_i. Returned as rank-per-element vectors.
inline std::vector<std::vector<int>> brute_rank_partitions(const Order& o) {
  std::vector<std::vector<int>> out;
  const auto antichains = brute_maximal_antichains(o);
  const auto chains = brute_maximal_chains(o);
  std::vector<int> rank(o.n, -1);
  // Assign ranks element by element; an antichain index is a rank value.
  std::size_t max_rank = o.n;
  auto valid = [&](std::size_t k) {
    std::vector<Mask> parts(k, 0);
    for (std::size_t i = 0; i < o.n; ++i) parts[rank[i]] |= Mask{1} << i;
    for (Mask part : parts) {
      if (part == 0) return false;
      if (std::find(antichains.begin(), antichains.end(), part) == antichains.end()) return false;
      for (Mask c : chains)
        if ((c & part) == 0) return false;
    }
    for (std::size_t a = 0; a < o.n; ++a)
      for (std::size_t b = 0; b < o.n; ++b)
        if (o.lt[a][b] && rank[a] >= rank[b]) return false;
    return true;
  };
  auto go = [&](auto&& self, std::size_t i) -> void {
    if (i == o.n) {
      int top = *std::max_element(rank.begin(), rank.end());
      if (valid(static_cast<std::size_t>(top) + 1)) out.push_back(rank);
      return;
    }
    for (std::size_t r = 0; r < max_rank; ++r) {
      rank[i] = static_cast<int>(r);
      self(self, i + 1);
    }
  };
  go(go, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration of posets up to isomorphism.

/// Down-set masks (strict) in a canonical labelling: the lexicographically
/// smallest relation matrix over relabellings that respect a degree signature.
inline std::vector<Mask> canonical_form(const std::vector<Mask>& down) {
  const std::size_t n = down.size();
  std::vector<Mask> up(n, 0);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t a = 0; a < n; ++a)
      if (down[b] >> a & 1) up[a] |= Mask{1} << b;
  std::vector<std::tuple<int, int, std::size_t>> sig;
  for (std::size_t i = 0; i < n; ++i) sig.emplace_back(std::popcount(down[i]), std::popcount(up[i]), i);
  std::sort(sig.begin(), sig.end());
  std::vector<std::size_t> order;
  std::vector<std::size_t> group_start;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || std::get<0>(sig[i]) != std::get<0>(sig[i - 1]) ||
        std::get<1>(sig[i]) != std::get<1>(sig[i - 1])) {
      group_start.push_back(i);
    }
    order.push_back(std::get<2>(sig[i]));
  }
  group_start.push_back(n);

  std::vector<Mask> best;
  auto encode = [&]() {
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
    std::vector<Mask> out(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < n; ++a)
        if (down[order[i]] >> a & 1) out[i] |= Mask{1} << pos[a];
    return out;
  };
  auto go = [&](auto&& self, std::size_t g) -> void {
    if (g + 1 == group_start.size()) {
      auto code = encode();
      if (best.empty() || code < best) best = std::move(code);
      return;
    }
    auto first = order.begin() + static_cast<std::ptrdiff_t>(group_start[g]);
    auto last = order.begin() + static_cast<std::ptrdiff_t>(group_start[g + 1]);
    std::sort(first, last);
    do {
      self(self, g + 1);
    } while (std::next_permutation(first, last));
  };
  go(go, 0);
  return best;
}

inline Poset poset_from_down(const std::vector<Mask>& down) {
  std::vector<Edge> edges;
  for (std::size_t b = 0; b < down.size(); ++b)
    for (std::size_t a = 0; a < down.size(); ++a)
      if (down[b] >> a & 1) edges.emplace_back(a, b);
  return Poset::from_index_relation(names(down.size()), edges);
}

/// All posets with exactly n elements, one per isomorphism class. Built by
/// adding a new maximal element with every possible down-set to each class
/// of size n-1.
inline std::vector<Poset> posets_of_size(std::size_t n) {
  std::vector<std::vector<Mask>> level = {{}};
  for (std::size_t k = 0; k < n; ++k) {
    std::set<std::vector<Mask>> next;
    for (const auto& down : level) {
      const Mask all = (Mask{1} << k) - 1;
      for (Mask d = 0; d <= all; ++d) {
        bool closed = true;
        for (std::size_t a = 0; a < k && closed; ++a)
          if ((d >> a & 1) && (down[a] & ~d)) closed = false;
        if (!closed) continue;
        auto grown = down;
        grown.push_back(d);
        next.insert(canonical_form(grown));
      }
    }
    level.assign(next.begin(), next.end());
  }
  std::vector<Poset> out;
  for (const auto& down : level) out.push_back(poset_from_down(down));
  return out;
}

inline std::vector<Poset> posets_up_to(std::size_t max_n) {
  std::vector<Poset> out;
  for (std::size_t n = 1; n <= max_n; ++n) {
    auto level = posets_of_size(n);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random generators.

inline Poset random_poset(std::mt19937_64& rng, std::size_t n, double density) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::bernoulli_distribution coin(density);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) edges.emplace_back(perm[i], perm[j]);
  return Poset::from_index_relation(names(n), edges);
}

/// A random graded poset: elements spread over `levels` ranks, each element
/// above rank 0 covering at least one element of the rank below and each
/// element below the top covered by at least one element of the rank above.
inline Poset random_graded(std::mt19937_64& rng, std::size_t n, std::size_t levels) {
  levels = std::max<std::size_t>(1, std::min(levels, n));
  std::vector<std::size_t> level_of(n);
  for (std::size_t i = 0; i < levels; ++i) level_of[i] = i;
  std::uniform_int_distribution<std::size_t> pick_level(0, levels - 1);
  for (std::size_t i = levels; i < n; ++i) level_of[i] = pick_level(rng);
  std::shuffle(level_of.begin(), level_of.end(), rng);
  std::vector<std::vector<std::size_t>> members(levels);
  for (std::size_t i = 0; i < n; ++i) members[level_of[i]].push_back(i);

  std::bernoulli_distribution coin(0.4);
  std::vector<Edge> edges;
  for (std::size_t r = 1; r < levels; ++r) {
    std::vector<bool> has_up(members[r - 1].size(), false);
    for (std::size_t hi : members[r]) {
      bool any = false;
      for (std::size_t k = 0; k < members[r - 1].size(); ++k) {
        if (coin(rng)) {
          edges.emplace_back(members[r - 1][k], hi);
          has_up[k] = any = true;
        }
      }
      if (!any) {
        std::uniform_int_distribution<std::size_t> pick(0, members[r - 1].size() - 1);
        const std::size_t k = pick(rng);
        edges.emplace_back(members[r - 1][k], hi);
        has_up[k] = true;
      }
    }
    for (std::size_t k = 0; k < members[r - 1].size(); ++k) {
      if (!has_up[k]) {
        std::uniform_int_distribution<std::size_t> pick(0, members[r].size() - 1);
        edges.emplace_back(members[r - 1][k], members[r][pick(rng)]);
      }
    }
  }
  return Poset::from_index_relation(names(n), edges);
}

// ---------------------------------------------------------------------------
// Independent W value: ranks from the longest chain below, counted per rank.

inline std::vector<int> brute_heights(const Order& o) {
  std::vector<int> h(o.n, 0);
  for (std::size_t round = 0; round < o.n; ++round)
    for (std::size_t a = 0; a < o.n; ++a)
      for (std::size_t b = 0; b < o.n; ++b)
        if (o.lt[a][b]) h[b] = std::max(h[b], h[a] + 1);
  return h;
}

/// W as counts listed highest rank first.
inline std::vector<std::uint32_t> brute_w(const Order& o, Mask subset) {
  const auto h = brute_heights(o);
  const int top = o.n ? *std::max_element(h.begin(), h.end()) : 0;
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(top) + 1, 0);
  for (std::size_t i = 0; i < o.n; ++i)
    if (subset >> i & 1) ++counts[static_cast<std::size_t>(top - h[i])];
  return counts;
}

// ---------------------------------------------------------------------------
// Cheapest repair by direct enumeration of order extensions: add every set of
// d currently incomparable ordered pairs, for growing d, close transitively,
// and keep graded results that retain the pinned cover. Cost is (d, total
// rank displacement of the original elements, cover symmetric difference).

struct RepairCost {
  std::size_t added = 0;
  std::size_t displacement = 0;
  std::size_t diff_size = 0;
  auto operator<=>(const RepairCost&) const = default;
};

inline std::optional<RepairCost> cheapest_repair(const Poset& original, const Poset& post,
                                                 std::optional<Edge> pinned, std::size_t max_d) {
  const std::size_t n = post.size();
  const auto base = Order::of(post);
  const auto base_covers = cover_set(base);
  const auto before = brute_heights(Order::of(original));
  std::vector<Edge> pairs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (!base.comparable(a, b)) pairs.emplace_back(a, b);

  for (std::size_t d = 1; d <= max_d && d <= pairs.size(); ++d) {
    std::optional<RepairCost> best;
    std::vector<std::size_t> pick;
    auto test = [&]() {
      std::vector<Edge> edges(base_covers.begin(), base_covers.end());
      for (auto k : pick) edges.push_back(pairs[k]);
      auto o = close(n, edges);
      if (!o || !brute_graded(*o)) return;
      const auto covers = cover_set(*o);
      if (pinned && !covers.count(*pinned)) return;
      const auto after = brute_heights(*o);
      RepairCost cost{d, 0, 0};
      for (std::size_t i = 0; i < original.size(); ++i) {
        const std::size_t j = post.require_index(original.id(i));
        cost.displacement += static_cast<std::size_t>(std::abs(after[j] - before[i]));
      }
      for (const auto& e : covers) cost.diff_size += !base_covers.count(e);
      for (const auto& e : base_covers) cost.diff_size += !covers.count(e);
      if (!best || cost < *best) best = cost;
    };
    auto go = [&](auto&& self, std::size_t start, std::size_t left) -> void {
      if (left == 0) {
        test();
        return;
      }
      for (std::size_t k = start; k + left <= pairs.size(); ++k) {
        pick.push_back(k);
        self(self, k + 1, left - 1);
        pick.pop_back();
      }
    };
    go(go, 0, d);
    if (best) return best;
  }
  return std::nullopt;
}

}  // namespace testsupport
