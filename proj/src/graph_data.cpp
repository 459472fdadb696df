#include "sblo/graph_data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

#include <fmt/core.h>

#include "sblo/error.hpp"
#include "sblo/hash.hpp"

namespace sblo {

Index IdIndex::intern(std::string_view id) {
    auto [it, inserted] = lookup_.try_emplace(std::string(id), static_cast<Index>(names_.size()));
    if (inserted)
        names_.emplace_back(id);
    return it->second;
}

std::optional<Index> IdIndex::find(std::string_view id) const {
    auto it = lookup_.find(std::string(id));
    if (it == lookup_.end())
        return std::nullopt;
    return it->second;
}

void IdIndex::save(const std::filesystem::path &path) const {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write " + path.string());
    for (std::size_t i = 0; i < names_.size(); ++i)
        out << i << '\t' << names_[i] << '\n';
}

IdIndex IdIndex::load(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot read " + path.string());
    IdIndex index;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(path.string(), lineno, "expected index<TAB>id");
        std::size_t expected = index.size();
        std::size_t got = 0;
        auto [p, ec] = std::from_chars(line.data(), line.data() + tab, got);
        if (ec != std::errc() || p != line.data() + tab || got != expected)
            throw ParseError(path.string(), lineno, "indices must be dense and in order");
        if (index.intern(std::string_view(line).substr(tab + 1)) != expected)
            throw ParseError(path.string(), lineno, "duplicate identifier");
    }
    return index;
}

namespace {

Adjacency build_adjacency(std::size_t nodes, std::span<const Edge> sorted_unique) {
    Adjacency adj;
    adj.offsets.assign(nodes + 1, 0);
    for (const auto &e : sorted_unique)
        ++adj.offsets[e.first + 1];
    for (std::size_t v = 0; v < nodes; ++v)
        adj.offsets[v + 1] += adj.offsets[v];
    adj.targets.reserve(sorted_unique.size());
    for (const auto &e : sorted_unique)
        adj.targets.push_back(e.second);
    return adj;
}

void sort_unique(std::vector<Edge> &edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

bool contains(std::span<const Index> sorted, Index value) {
    return std::binary_search(sorted.begin(), sorted.end(), value);
}

} // namespace

SocialNetwork::SocialNetwork(std::size_t users, std::span<const Edge> edges) {
    std::vector<Edge> directed;
    directed.reserve(2 * edges.size());
    for (const auto &e : edges) {
        if (e.first >= users || e.second >= users)
            throw ArgumentError(fmt::format("social edge ({}, {}) outside {} users", e.first,
                                            e.second, users));
        if (e.first == e.second)
            continue;
        directed.push_back(e);
        directed.push_back({e.second, e.first});
    }
    sort_unique(directed);
    adjacency_ = build_adjacency(users, directed);
}

bool SocialNetwork::has_edge(Index a, Index b) const {
    return a < user_count() && contains(neighbors(a), b);
}

std::vector<Edge> SocialNetwork::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (Index u = 0; u < user_count(); ++u)
        for (Index v : neighbors(u))
            if (u < v)
                out.push_back({u, v});
    return out;
}

std::vector<std::size_t> SocialNetwork::degrees() const {
    std::vector<std::size_t> out(user_count());
    for (Index u = 0; u < user_count(); ++u)
        out[u] = degree(u);
    return out;
}

SparseMatrix SocialNetwork::adjacency_matrix() const {
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(adjacency_.targets.size());
    for (Index u = 0; u < user_count(); ++u)
        for (Index v : neighbors(u))
            entries.emplace_back(u, v, 1.0);
    SparseMatrix a(static_cast<Eigen::Index>(user_count()), static_cast<Eigen::Index>(user_count()));
    a.setFromTriplets(entries.begin(), entries.end());
    return a;
}

SocialNetwork SocialNetwork::resized(std::size_t users) const {
    if (users < user_count())
        throw ArgumentError("cannot shrink a social network");
    auto e = edges();
    return SocialNetwork(users, e);
}

InteractionNetwork::InteractionNetwork(std::size_t users, std::size_t objects,
                                       std::span<const Edge> edges) {
    std::vector<Edge> forward(edges.begin(), edges.end());
    for (const auto &e : forward)
        if (e.first >= users || e.second >= objects)
            throw ArgumentError(fmt::format("interaction ({}, {}) outside {}x{}", e.first,
                                            e.second, users, objects));
    sort_unique(forward);
    std::vector<Edge> backward;
    backward.reserve(forward.size());
    for (const auto &e : forward)
        backward.push_back({e.second, e.first});
    std::sort(backward.begin(), backward.end());
    by_user_ = build_adjacency(users, forward);
    by_object_ = build_adjacency(objects, backward);
}

bool InteractionNetwork::has_edge(Index user, Index object) const {
    return user < user_count() && contains(items(user), object);
}

std::vector<Edge> InteractionNetwork::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (Index u = 0; u < user_count(); ++u)
        for (Index o : items(u))
            out.push_back({u, o});
    return out;
}

std::vector<std::size_t> InteractionNetwork::user_degrees() const {
    std::vector<std::size_t> out(user_count());
    for (Index u = 0; u < user_count(); ++u)
        out[u] = user_degree(u);
    return out;
}

std::vector<std::size_t> InteractionNetwork::object_degrees() const {
    std::vector<std::size_t> out(object_count());
    for (Index o = 0; o < object_count(); ++o)
        out[o] = object_degree(o);
    return out;
}

SparseMatrix InteractionNetwork::biadjacency_matrix() const {
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(edge_count());
    for (Index u = 0; u < user_count(); ++u)
        for (Index o : items(u))
            entries.emplace_back(u, o, 1.0);
    SparseMatrix b(static_cast<Eigen::Index>(user_count()),
                   static_cast<Eigen::Index>(object_count()));
    b.setFromTriplets(entries.begin(), entries.end());
    return b;
}

InteractionNetwork InteractionNetwork::resized(std::size_t users) const {
    if (users < user_count())
        throw ArgumentError("cannot shrink an interaction network");
    auto e = edges();
    return InteractionNetwork(users, object_count(), e);
}

std::uint64_t fingerprint(const InteractionNetwork &net) {
    Fnv1a h;
    h.update(std::string_view("interactions"));
    h.update(static_cast<std::uint64_t>(net.user_count()));
    h.update(static_cast<std::uint64_t>(net.object_count()));
    for (const auto &e : net.edges()) {
        h.update(static_cast<std::uint64_t>(e.first));
        h.update(static_cast<std::uint64_t>(e.second));
    }
    return h.digest();
}

std::uint64_t fingerprint(const SocialNetwork &net) {
    Fnv1a h;
    h.update(std::string_view("social"));
    h.update(static_cast<std::uint64_t>(net.user_count()));
    for (const auto &e : net.edges()) {
        h.update(static_cast<std::uint64_t>(e.first));
        h.update(static_cast<std::uint64_t>(e.second));
    }
    return h.digest();
}

DatasetStats compute_stats(const SocialNetwork &social, const InteractionNetwork &interactions) {
    if (social.user_count() != interactions.user_count())
        throw ConsistencyError(fmt::format("social network has {} users, interactions have {}",
                                           social.user_count(), interactions.user_count()));
    DatasetStats s;
    s.users = social.user_count();
    s.objects = interactions.object_count();
    s.social_edges = social.edge_count();
    s.interactions = interactions.edge_count();
    if (s.users == 0)
        return s;
    const double m = static_cast<double>(s.users);
    s.mean_social_degree = 2.0 * static_cast<double>(s.social_edges) / m;
    s.mean_interaction_degree = static_cast<double>(s.interactions) / m;
    s.social_sparsity = 2.0 * static_cast<double>(s.social_edges) / (m * m);
    if (s.objects > 0)
        s.interaction_sparsity =
            static_cast<double>(s.interactions) / (m * static_cast<double>(s.objects));
    return s;
}

namespace {

// Calls `fn(lineno, tokens)` for every non-comment, non-blank line.
template <class Fn>
std::size_t for_each_record(const std::filesystem::path &path, Fn &&fn) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open " + path.string());
    std::string line;
    std::vector<std::string_view> tokens;
    std::size_t lineno = 0;
    std::size_t records = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        tokens.clear();
        std::string_view rest(line);
        while (true) {
            auto begin = rest.find_first_not_of(" \t\v\f");
            if (begin == std::string_view::npos)
                break;
            rest.remove_prefix(begin);
            auto end = rest.find_first_of(" \t\v\f");
            tokens.push_back(rest.substr(0, end));
            if (end == std::string_view::npos)
                break;
            rest.remove_prefix(end);
        }
        if (tokens.empty() || tokens.front().front() == '#')
            continue;
        fn(lineno, tokens);
        ++records;
    }
    return records;
}

} // namespace

SocialNetwork ingest_social(const std::filesystem::path &path, IdIndex &users) {
    std::vector<Edge> edges;
    auto records = for_each_record(path, [&](std::size_t lineno, const auto &tokens) {
        if (tokens.size() != 2)
            throw ParseError(path.string(), lineno,
                             fmt::format("expected 2 identifiers, found {}", tokens.size()));
        Index a = users.intern(tokens[0]);
        Index b = users.intern(tokens[1]);
        edges.push_back({a, b});
    });
    if (records == 0)
        throw DataError(path.string() + ": empty social network");
    return SocialNetwork(users.size(), edges);
}

InteractionNetwork ingest_ratings(const std::filesystem::path &path, IdIndex &users,
                                  IdIndex &objects, double threshold) {
    // Keyed by (user index, object id); object ids are interned only once a
    // pair qualifies so that sub-threshold objects never enter the index.
    std::map<std::pair<Index, std::string>, double> best;
    std::vector<std::pair<Index, std::string>> order;
    auto records = for_each_record(path, [&](std::size_t lineno, const auto &tokens) {
        if (tokens.size() != 3)
            throw ParseError(path.string(), lineno,
                             fmt::format("expected user, object, rating; found {} fields",
                                         tokens.size()));
        double rating = 0.0;
        auto tok = tokens[2];
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), rating);
        if (ec != std::errc() || p != tok.data() + tok.size())
            throw ParseError(path.string(), lineno,
                             fmt::format("non-numeric rating '{}'", std::string(tok)));
        Index u = users.intern(tokens[0]);
        auto key = std::make_pair(u, std::string(tokens[1]));
        auto [it, inserted] = best.try_emplace(key, rating);
        if (inserted)
            order.push_back(std::move(key));
        else
            it->second = std::max(it->second, rating);
    });
    if (records == 0)
        throw DataError(path.string() + ": empty rating file");

    // Objects get indices in first-appearance order of their qualifying pairs.
    std::vector<Edge> edges;
    for (const auto &key : order) {
        if (best.at(key) >= threshold)
            edges.push_back({key.first, objects.intern(key.second)});
    }
    return InteractionNetwork(users.size(), objects.size(), edges);
}

Dataset load_dataset(const std::filesystem::path &social_path,
                     const std::filesystem::path &ratings_path, double threshold) {
    Dataset d;
    auto social = ingest_social(social_path, d.users);
    auto interactions = ingest_ratings(ratings_path, d.users, d.objects, threshold);
    d.social = social.resized(d.users.size());
    d.interactions = std::move(interactions);
    return d;
}

void export_social(const std::filesystem::path &path, const SocialNetwork &net,
                   const IdIndex &users) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write " + path.string());
    for (const auto &e : net.edges())
        out << users.name(e.first) << ' ' << users.name(e.second) << '\n';
}

void export_interactions(const std::filesystem::path &path, const InteractionNetwork &net,
                         const IdIndex &users, const IdIndex &objects) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write " + path.string());
    for (const auto &e : net.edges())
        out << users.name(e.first) << ' ' << objects.name(e.second) << " 1\n";
}

} // namespace sblo
