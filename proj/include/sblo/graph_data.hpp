#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/SparseCore>

namespace sblo {

using Index = std::uint32_t;

struct Edge {
    Index first;
    Index second;

    friend auto operator<=>(const Edge &, const Edge &) = default;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Bijection between source identifiers and dense indices, assigned in
/// first-appearance order.
class IdIndex {
public:
    /// Returns the index of `id`, registering it if unseen.
    Index intern(std::string_view id);
    std::optional<Index> find(std::string_view id) const;
    const std::string &name(Index index) const { return names_.at(index); }
    std::size_t size() const noexcept { return names_.size(); }

    /// One `index<TAB>id` line per entry, in index order.
    void save(const std::filesystem::path &path) const;
    static IdIndex load(const std::filesystem::path &path);

    friend bool operator==(const IdIndex &a, const IdIndex &b) { return a.names_ == b.names_; }

private:
    std::unordered_map<std::string, Index> lookup_;
    std::vector<std::string> names_;
};

// Compressed adjacency: neighbours of node v are targets[offsets[v] .. offsets[v+1]),
// sorted ascending.
struct Adjacency {
    std::vector<std::size_t> offsets{0};
    std::vector<Index> targets;

    std::span<const Index> operator[](std::size_t v) const {
        return {targets.data() + offsets[v], offsets[v + 1] - offsets[v]};
    }
    std::size_t degree(std::size_t v) const { return offsets[v + 1] - offsets[v]; }

    friend bool operator==(const Adjacency &, const Adjacency &) = default;
};

/// Undirected, unweighted user-user network (symmetric 0/1 adjacency, no self-loops).
class SocialNetwork {
public:
    SocialNetwork() = default;
    /// Symmetrizes `edges`, drops duplicates and self-loops.
    SocialNetwork(std::size_t users, std::span<const Edge> edges);

    std::size_t user_count() const noexcept { return adjacency_.offsets.size() - 1; }
    std::size_t edge_count() const noexcept { return adjacency_.targets.size() / 2; }
    std::size_t degree(Index user) const { return adjacency_.degree(user); }
    std::span<const Index> neighbors(Index user) const { return adjacency_[user]; }
    bool has_edge(Index a, Index b) const;

    /// Each undirected edge once as (low, high), sorted.
    std::vector<Edge> edges() const;
    std::vector<std::size_t> degrees() const;
    SparseMatrix adjacency_matrix() const;

    /// Same edges on a universe of `users` >= user_count() users.
    SocialNetwork resized(std::size_t users) const;

    friend bool operator==(const SocialNetwork &, const SocialNetwork &) = default;

private:
    Adjacency adjacency_;
};

/// Unweighted bipartite user-object network.
class InteractionNetwork {
public:
    InteractionNetwork() = default;
    /// Edges are (user, object) pairs; duplicates are dropped.
    InteractionNetwork(std::size_t users, std::size_t objects, std::span<const Edge> edges);

    std::size_t user_count() const noexcept { return by_user_.offsets.size() - 1; }
    std::size_t object_count() const noexcept { return by_object_.offsets.size() - 1; }
    std::size_t edge_count() const noexcept { return by_user_.targets.size(); }

    std::span<const Index> items(Index user) const { return by_user_[user]; }
    std::span<const Index> collectors(Index object) const { return by_object_[object]; }
    std::size_t user_degree(Index user) const { return by_user_.degree(user); }
    std::size_t object_degree(Index object) const { return by_object_.degree(object); }
    bool has_edge(Index user, Index object) const;

    /// (user, object) pairs sorted by user then object.
    std::vector<Edge> edges() const;
    std::vector<std::size_t> user_degrees() const;
    std::vector<std::size_t> object_degrees() const;
    SparseMatrix biadjacency_matrix() const;

    InteractionNetwork resized(std::size_t users) const;

    friend bool operator==(const InteractionNetwork &, const InteractionNetwork &) = default;

private:
    Adjacency by_user_;
    Adjacency by_object_;
};

/// Content hash of the edge structure; identifies the network a model was fitted on.
std::uint64_t fingerprint(const InteractionNetwork &net);
std::uint64_t fingerprint(const SocialNetwork &net);

struct DatasetStats {
    std::size_t users = 0;
    std::size_t objects = 0;
    std::size_t social_edges = 0;
    std::size_t interactions = 0;
    double mean_social_degree = 0.0;
    double mean_interaction_degree = 0.0;
    double social_sparsity = 0.0;      // 2|E^A| / m^2
    double interaction_sparsity = 0.0; // |E^B| / (m n)
};

DatasetStats compute_stats(const SocialNetwork &social, const InteractionNetwork &interactions);

/// Reads `a b` pairs; `#` lines and blank lines are skipped. Users are
/// registered in `users` and the returned network spans users.size() users.
SocialNetwork ingest_social(const std::filesystem::path &path, IdIndex &users);

/// Reads `user object rating` lines. A pair becomes an edge when its maximum
/// rating over duplicate lines is >= `threshold`. Every user is registered;
/// objects are registered only once they have a qualifying rating.
InteractionNetwork ingest_ratings(const std::filesystem::path &path, IdIndex &users,
                                  IdIndex &objects, double threshold = 3.0);

struct Dataset {
    IdIndex users;
    IdIndex objects;
    SocialNetwork social;
    InteractionNetwork interactions;
};

/// Both files on one user index; each network spans every registered user.
Dataset load_dataset(const std::filesystem::path &social_path,
                     const std::filesystem::path &ratings_path, double threshold = 3.0);

/// Edge-list writers. Output is sorted by (first index, second index);
/// interactions are written with a rating column of 1.
void export_social(const std::filesystem::path &path, const SocialNetwork &net,
                   const IdIndex &users);
void export_interactions(const std::filesystem::path &path, const InteractionNetwork &net,
                         const IdIndex &users, const IdIndex &objects);

} // namespace sblo
