#include "sblo/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/core.h>

#include "sblo/error.hpp"
#include "sblo/hash.hpp"

namespace sblo {

std::string_view to_string(Algorithm a) {
    switch (a) {
    case Algorithm::Sblo: return "sblo";
    case Algorithm::Blo: return "blo";
    case Algorithm::Md: return "md";
    case Algorithm::Hhp: return "hhp";
    case Algorithm::Pd: return "pd";
    case Algorithm::CosraT: return "cosra_t";
    case Algorithm::Socmd: return "socmd";
    case Algorithm::Rwr: return "rwr";
    case Algorithm::Grm: return "grm";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (auto a : kAllAlgorithms)
        if (to_string(a) == name)
            return a;
    return std::nullopt;
}

std::string to_string(const ParameterPoint &point) {
    std::string out;
    for (const auto &[name, value] : point) {
        if (!out.empty())
            out += ';';
        out += fmt::format("{}={}", name, value);
    }
    return out;
}

double parameter(const ParameterPoint &point, std::string_view name) {
    for (const auto &[key, value] : point)
        if (key == name)
            return value;
    throw ArgumentError(fmt::format("missing parameter '{}'", name));
}

std::size_t ParameterGrid::size() const {
    std::size_t total = 1;
    for (const auto &v : values)
        total *= v.size();
    return total;
}

std::vector<ParameterPoint> ParameterGrid::points() const {
    std::vector<ParameterPoint> out;
    const auto total = size();
    out.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        ParameterPoint point(names.size());
        std::size_t rest = flat;
        for (std::size_t k = names.size(); k-- > 0;) {
            point[k] = {names[k], values[k][rest % values[k].size()]};
            rest /= values[k].size();
        }
        out.push_back(std::move(point));
    }
    return out;
}

namespace {

std::vector<double> steps(double from, double to, double step) {
    std::vector<double> out;
    const auto count = static_cast<int>(std::lround((to - from) / step));
    for (int k = 0; k <= count; ++k)
        out.push_back(std::round((from + k * step) * 1e9) / 1e9);
    return out;
}

std::vector<double> mantissa_decades() {
    std::vector<double> out;
    // divide rather than multiply so 6e-4 prints as 0.0006
    for (double inverse : {1e4, 1e3, 1e2, 1e1})
        for (double mantissa : {1.0, 2.0, 4.0, 6.0, 8.0})
            out.push_back(mantissa / inverse);
    return out;
}

} // namespace

ParameterGrid default_grid(Algorithm a) {
    switch (a) {
    case Algorithm::Sblo: return {{"lambda1", "lambda2"}, {mantissa_decades(), mantissa_decades()}};
    case Algorithm::Blo: return {{"lambda2"}, {mantissa_decades()}};
    case Algorithm::Hhp: return {{"lambda"}, {steps(0.0, 1.0, 0.1)}};
    case Algorithm::Pd: return {{"epsilon"}, {steps(-1.0, 0.0, 0.1)}};
    case Algorithm::CosraT: return {{"theta"}, {steps(0.1, 2.0, 0.1)}};
    case Algorithm::Socmd: return {{"p"}, {steps(0.0, 1.0, 0.1)}};
    case Algorithm::Rwr:
        return {{"theta1", "theta2", "theta3"},
                {{0.0, 0.5, 1.0, 2.0}, {0.0, 0.5, 1.0, 2.0}, steps(0.1, 0.9, 0.1)}};
    case Algorithm::Md:
    case Algorithm::Grm: return {};
    }
    return {};
}

const ParameterGrid &ExperimentConfig::grid(Algorithm a) const {
    static const std::map<Algorithm, ParameterGrid> defaults = [] {
        std::map<Algorithm, ParameterGrid> out;
        for (auto alg : kAllAlgorithms)
            out[alg] = default_grid(alg);
        return out;
    }();
    auto it = grids.find(a);
    return it != grids.end() ? it->second : defaults.at(a);
}

void ExperimentConfig::validate() const {
    if (!std::filesystem::exists(social_path))
        throw ConfigError("social file not found: " + social_path.string());
    if (!std::filesystem::exists(ratings_path))
        throw ConfigError("ratings file not found: " + ratings_path.string());
    if (!(probe_fraction > 0.0 && probe_fraction < 1.0))
        throw ConfigError("protocol.probe_fraction must lie in (0,1)");
    if (runs == 0)
        throw ConfigError("protocol.runs must be positive");
    if (list_lengths.empty() || std::find(list_lengths.begin(), list_lengths.end(), 0u) !=
                                    list_lengths.end())
        throw ConfigError("protocol.list_lengths must be nonempty positive integers");
    if (classes.empty())
        throw ConfigError("protocol.classes is empty");
    if (!(thresholds.cold_max <= thresholds.inactive_max &&
          thresholds.inactive_max < thresholds.active_min))
        throw ConfigError("need cold_max <= inactive_max < active_min");
    if (algorithms.empty())
        throw ConfigError("algorithms.run is empty");
    for (auto a : algorithms) {
        const auto &g = grid(a);
        for (const auto &v : g.values)
            if (v.empty())
                throw ConfigError(fmt::format("empty grid for {}", to_string(a)));
    }
    if (!(solver_tolerance > 0.0))
        throw ConfigError("sblo.tolerance must be positive");
    for (double s : sigmas)
        if (!(s >= 0.0 && s <= 1.0))
            throw ConfigError("analysis.sigma values must lie in [0,1]");
    if (rewire_seeds == 0 || histogram_bins == 0 || max_attempts_factor == 0)
        throw ConfigError("analysis counts must be positive");
}

namespace {

std::string join(const std::vector<double> &values) {
    std::string out;
    for (double v : values) {
        if (!out.empty())
            out += ", ";
        out += fmt::format("{}", v);
    }
    return out;
}

} // namespace

std::string ExperimentConfig::canonical() const {
    std::ostringstream out;
    out << "[data]\n";
    out << "name = " << dataset_name << '\n';
    out << "social = " << social_path.generic_string() << '\n';
    out << "ratings = " << ratings_path.generic_string() << '\n';
    out << fmt::format("rating_threshold = {}\n", rating_threshold);
    out << "\n[protocol]\n";
    out << fmt::format("probe_fraction = {}\n", probe_fraction);
    out << "runs = " << runs << '\n';
    out << "seed = " << seed_base << '\n';
    out << "list_lengths = ";
    for (std::size_t k = 0; k < list_lengths.size(); ++k)
        out << (k ? ", " : "") << list_lengths[k];
    out << "\nclasses = ";
    for (std::size_t k = 0; k < classes.size(); ++k)
        out << (k ? ", " : "") << to_string(classes[k]);
    out << "\ncold_max = " << thresholds.cold_max << '\n';
    out << "inactive_max = " << thresholds.inactive_max << '\n';
    out << "active_min = " << thresholds.active_min << '\n';
    out << "mask_trained = " << (mask_trained ? "true" : "false") << '\n';
    out << "tuning = " << (tuning == TuningMode::OnTest ? "test" : "held-out") << '\n';
    out << "hamming_pairs = " << hamming_pairs.value_or(0) << '\n';
    out << "\n[algorithms]\nrun = ";
    for (std::size_t k = 0; k < algorithms.size(); ++k)
        out << (k ? ", " : "") << to_string(algorithms[k]);
    out << '\n';
    for (auto a : kAllAlgorithms) {
        const auto &g = grid(a);
        if (g.names.empty() && a != Algorithm::Sblo)
            continue;
        out << "\n[" << to_string(a) << "]\n";
        for (std::size_t k = 0; k < g.names.size(); ++k)
            out << g.names[k] << " = " << join(g.values[k]) << '\n';
        if (a == Algorithm::Sblo)
            out << fmt::format("tolerance = {}\n", solver_tolerance);
    }
    out << "\n[analysis]\n";
    out << "sigma = " << join(sigmas) << '\n';
    out << "rewire_seeds = " << rewire_seeds << '\n';
    out << "max_attempts_factor = " << max_attempts_factor << '\n';
    out << "histogram_bins = " << histogram_bins << '\n';
    out << "\n[output]\ndir = " << output_dir.generic_string() << '\n';
    return out.str();
}

std::uint64_t ExperimentConfig::hash() const {
    Fnv1a h;
    h.update(canonical());
    return h.digest();
}

namespace {

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string_view::npos)
        return {};
    const auto end = s.find_last_not_of(" \t");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_list(const std::string &value) {
    std::vector<std::string> out;
    std::string_view rest(value);
    while (true) {
        const auto comma = rest.find(',');
        auto item = trim(rest.substr(0, comma));
        if (!item.empty())
            out.push_back(std::move(item));
        if (comma == std::string_view::npos)
            break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

template <class T>
T parse_number(const std::string &key, const std::string &text) {
    T value{};
    const auto *end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || p != end)
        throw ConfigError(fmt::format("{}: '{}' is not a valid number", key, text));
    return value;
}

bool parse_bool(const std::string &key, const std::string &text) {
    if (text == "true" || text == "1" || text == "yes")
        return true;
    if (text == "false" || text == "0" || text == "no")
        return false;
    throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, text));
}

std::vector<double> parse_doubles(const std::string &key, const std::string &text) {
    std::vector<double> out;
    for (const auto &item : split_list(text))
        out.push_back(parse_number<double>(key, item));
    if (out.empty())
        throw ConfigError(key + ": empty list");
    return out;
}

} // namespace

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path &base_dir) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw ConfigError(fmt::format("line {}: {}", e.line(), e.message()));
    }

    ExperimentConfig cfg;
    auto resolve = [&](const std::string &p) {
        std::filesystem::path path(p);
        return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
    };

    for (const auto &[section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError(fmt::format("key '{}' outside any section", section));
        const auto algorithm = parse_algorithm(section);
        ParameterGrid custom_grid;
        for (const auto &[key, node] : body) {
            const std::string value = trim(node.data());
            const std::string where = section + "." + key;
            if (section == "data") {
                if (key == "name") cfg.dataset_name = value;
                else if (key == "social") cfg.social_path = resolve(value);
                else if (key == "ratings") cfg.ratings_path = resolve(value);
                else if (key == "rating_threshold") cfg.rating_threshold = parse_number<double>(where, value);
                else throw ConfigError("unknown key " + where);
            } else if (section == "protocol") {
                if (key == "probe_fraction") cfg.probe_fraction = parse_number<double>(where, value);
                else if (key == "runs") cfg.runs = parse_number<std::size_t>(where, value);
                else if (key == "seed") cfg.seed_base = parse_number<std::uint64_t>(where, value);
                else if (key == "list_lengths") {
                    cfg.list_lengths.clear();
                    for (const auto &item : split_list(value))
                        cfg.list_lengths.push_back(parse_number<std::size_t>(where, item));
                } else if (key == "classes") {
                    cfg.classes.clear();
                    for (const auto &item : split_list(value)) {
                        auto c = parse_user_class(item);
                        if (!c)
                            throw ConfigError(fmt::format("{}: unknown class '{}'", where, item));
                        cfg.classes.push_back(*c);
                    }
                } else if (key == "cold_max") cfg.thresholds.cold_max = parse_number<std::size_t>(where, value);
                else if (key == "inactive_max") cfg.thresholds.inactive_max = parse_number<std::size_t>(where, value);
                else if (key == "active_min") cfg.thresholds.active_min = parse_number<std::size_t>(where, value);
                else if (key == "mask_trained") cfg.mask_trained = parse_bool(where, value);
                else if (key == "tuning") {
                    if (value == "test") cfg.tuning = TuningMode::OnTest;
                    else if (value == "held-out") cfg.tuning = TuningMode::HeldOut;
                    else throw ConfigError(where + ": expected 'test' or 'held-out'");
                } else if (key == "hamming_pairs") {
                    const auto pairs = parse_number<std::size_t>(where, value);
                    cfg.hamming_pairs = pairs == 0 ? std::nullopt : std::optional(pairs);
                } else throw ConfigError("unknown key " + where);
            } else if (section == "algorithms") {
                if (key == "run") {
                    cfg.algorithms.clear();
                    for (const auto &item : split_list(value)) {
                        auto a = parse_algorithm(item);
                        if (!a)
                            throw ConfigError(fmt::format("{}: unknown algorithm '{}'", where, item));
                        cfg.algorithms.push_back(*a);
                    }
                } else throw ConfigError("unknown key " + where);
            } else if (algorithm) {
                if (*algorithm == Algorithm::Sblo && key == "tolerance") {
                    cfg.solver_tolerance = parse_number<double>(where, value);
                    continue;
                }
                const auto defaults = default_grid(*algorithm);
                if (std::find(defaults.names.begin(), defaults.names.end(), key) ==
                    defaults.names.end())
                    throw ConfigError("unknown key " + where);
                custom_grid.names.push_back(key);
                custom_grid.values.push_back(parse_doubles(where, value));
            } else if (section == "analysis") {
                if (key == "sigma") cfg.sigmas = parse_doubles(where, value);
                else if (key == "rewire_seeds") cfg.rewire_seeds = parse_number<std::size_t>(where, value);
                else if (key == "max_attempts_factor") cfg.max_attempts_factor = parse_number<std::size_t>(where, value);
                else if (key == "histogram_bins") cfg.histogram_bins = parse_number<std::size_t>(where, value);
                else throw ConfigError("unknown key " + where);
            } else if (section == "output") {
                if (key == "dir") cfg.output_dir = resolve(value);
                else throw ConfigError("unknown key " + where);
            } else {
                throw ConfigError("unknown section [" + section + "]");
            }
        }
        if (algorithm && !custom_grid.names.empty()) {
            // Unlisted parameters keep their default value lists; order follows the defaults.
            const auto defaults = default_grid(*algorithm);
            ParameterGrid merged = defaults;
            for (std::size_t k = 0; k < custom_grid.names.size(); ++k) {
                auto pos = std::find(merged.names.begin(), merged.names.end(), custom_grid.names[k]);
                merged.values[static_cast<std::size_t>(pos - merged.names.begin())] =
                    custom_grid.values[k];
            }
            cfg.grids[*algorithm] = std::move(merged);
        }
    }
    if (cfg.social_path.empty() || cfg.ratings_path.empty())
        throw ConfigError("data.social and data.ratings are required");
    cfg.output_dir = resolve(cfg.output_dir.string());
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.parent_path());
}

} // namespace sblo
