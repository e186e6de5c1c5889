#include "krsim/clique_index.hpp"

#include <algorithm>
#include <limits>

namespace krsim {

std::uint64_t CliqueIndex::estimated_bytes(std::uint64_t cliques, int k) {
  const std::uint64_t pairs = static_cast<std::uint64_t>(k) * (k - 1) / 2;
  // pool + live + slot + stamp + bucket entries (ids plus ~50% vector slack)
  const std::uint64_t per_clique =
      sizeof(Vertex) * static_cast<std::uint64_t>(k) + sizeof(Id) + sizeof(std::uint32_t) +
      sizeof(std::uint64_t) + pairs * sizeof(Id) * 3 / 2;
  return cliques * per_clique;
}

CliqueIndex CliqueIndex::build(const Graph& g, int k) {
  const std::size_t n = g.vertex_count();
  if (k < 3 || static_cast<std::size_t>(k) > n || k > kMaxK) {
    throw std::invalid_argument("CliqueIndex::build: need 3 <= k <= n (and k <= " +
                                std::to_string(kMaxK) + ")");
  }
  (void)binomial(n, static_cast<std::uint64_t>(k));  // 64-bit count guard

  CliqueIndex idx;
  idx.k_ = k;
  idx.n_ = n;
  const std::vector<VertexSet> all = enumerate_k_cliques(g, k);
  if (all.size() >= std::numeric_limits<Id>::max()) {
    throw std::length_error("CliqueIndex::build: too many cliques to materialise");
  }
  idx.pool_.reserve(all.size() * static_cast<std::size_t>(k));
  for (const VertexSet& c : all) idx.pool_.insert(idx.pool_.end(), c.begin(), c.end());
  idx.live_.resize(all.size());
  idx.slot_.resize(all.size());
  idx.stamp_.assign(all.size(), 0);
  for (Id id = 0; id < all.size(); ++id) {
    idx.live_[id] = id;
    idx.slot_[id] = id;
    const auto v = idx.vertices(id);
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) idx.edge_to_cliques_[idx.key(v[a], v[b])].push_back(id);
    }
  }
  return idx;
}

VertexSet CliqueIndex::sample(const Graph& /*g*/, Rng& rng) const {
  if (live_.empty()) throw ProcessTerminated();
  std::uniform_int_distribution<std::size_t> pick(0, live_.size() - 1);
  const auto v = vertices(live_[pick(rng)]);
  return VertexSet(std::vector<Vertex>(v.begin(), v.end()));
}

std::optional<CliqueIndex::Id> CliqueIndex::find(const VertexSet& u) const {
  if (u.size() != static_cast<std::size_t>(k_)) return std::nullopt;
  const auto it = edge_to_cliques_.find(key(u[0], u[1]));
  if (it == edge_to_cliques_.end()) return std::nullopt;
  for (Id id : it->second) {
    const auto v = vertices(id);
    if (std::equal(v.begin(), v.end(), u.begin())) return id;
  }
  return std::nullopt;
}

bool CliqueIndex::contains(const VertexSet& u) const { return find(u).has_value(); }

void CliqueIndex::kill(Id id) {
  const std::uint32_t slot = slot_[id];
  const Id moved = live_.back();
  live_[slot] = moved;
  slot_[moved] = slot;
  live_.pop_back();
  slot_[id] = kDead;
}

RemovalDelta CliqueIndex::apply_removal(Graph& g, const VertexSet& u) {
  const auto target = find(u);
  if (!target) throw std::invalid_argument("CliqueIndex::apply_removal: clique not in index");

  ++step_;
  RemovalDelta delta;
  delta.k = k_;
  const auto in_u = [&](Vertex x) { return u.contains(x); };

  std::vector<Id> doomed;
  for (int a = 0; a < k_; ++a) {
    for (int b = a + 1; b < k_; ++b) {
      auto it = edge_to_cliques_.find(key(u[a], u[b]));
      if (it == edge_to_cliques_.end()) continue;
      for (Id id : it->second) {
        if (stamp_[id] == step_) continue;
        stamp_[id] = step_;
        doomed.push_back(id);
      }
    }
  }

  for (Id id : doomed) {
    const auto v = vertices(id);
    const auto shared = std::count_if(v.begin(), v.end(), in_u);
    ++delta.by_m[static_cast<std::size_t>(shared)];
    kill(id);
    // drop the id from every bucket it sits in; u's own buckets go wholesale below
    for (int a = 0; a < k_; ++a) {
      for (int b = a + 1; b < k_; ++b) {
        if (in_u(v[a]) && in_u(v[b])) continue;
        auto it = edge_to_cliques_.find(key(v[a], v[b]));
        auto& bucket = it->second;
        auto pos = std::find(bucket.begin(), bucket.end(), id);
        *pos = bucket.back();
        bucket.pop_back();
        if (bucket.empty()) edge_to_cliques_.erase(it);
      }
    }
  }
  for (int a = 0; a < k_; ++a) {
    for (int b = a + 1; b < k_; ++b) edge_to_cliques_.erase(key(u[a], u[b]));
  }
  remove_clique_edges(g, u);
  return delta;
}

std::vector<VertexSet> CliqueIndex::cliques() const {
  std::vector<VertexSet> out;
  out.reserve(live_.size());
  for (Id id : live_) {
    const auto v = vertices(id);
    out.emplace_back(std::vector<Vertex>(v.begin(), v.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexSet> CliqueIndex::cliques_containing(Vertex a, Vertex b) const {
  std::vector<VertexSet> out;
  const auto it = edge_to_cliques_.find(key(a, b));
  if (it == edge_to_cliques_.end()) return out;
  for (Id id : it->second) {
    const auto v = vertices(id);
    out.emplace_back(std::vector<Vertex>(v.begin(), v.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool CliqueIndex::matches_rebuild(const Graph& g) const {
  for (std::size_t s = 0; s < live_.size(); ++s) {
    if (slot_[live_[s]] != s) return false;
  }
  const CliqueIndex fresh = build(g, k_);
  if (cliques() != fresh.cliques()) return false;
  std::size_t nonempty = 0;
  for (const auto& [key, ids] : fresh.edge_to_cliques_) {
    const Vertex a = static_cast<Vertex>(key / n_);
    const Vertex b = static_cast<Vertex>(key % n_);
    if (cliques_containing(a, b) != fresh.cliques_containing(a, b)) return false;
    ++nonempty;
  }
  return nonempty == edge_to_cliques_.size();
}

}  // namespace krsim
