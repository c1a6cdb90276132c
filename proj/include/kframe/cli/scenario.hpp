#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kframe/frame_engine.hpp"

namespace kframe::cli {

/// Malformed or inconsistent configuration. `path()` names the offending field
/// as a JSON path ("$.k_spec.values[1]"), or is empty for syntax errors.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message);
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct KSpec {
    enum class Kind { Identity, Diagonal, RandomRank, Explicit };
    Kind kind = Kind::Identity;
    std::vector<Scalar> values; // diagonal
    std::size_t rank = 0;       // random-rank
    std::uint64_t seed = 0;     // random-rank
    Matrix matrix;              // explicit, d x d
};

struct FrameSpec {
    enum class Kind { GenerateParsevalK, Explicit, RandomBessel };
    Kind kind = Kind::GenerateParsevalK;
    std::uint64_t seed = 0; // generated kinds
    Matrix samples;         // explicit, d x m (column i = F(omega_i))
};

struct Scenario {
    std::size_t dim = 1;
    std::size_t atoms = 1;
    std::optional<std::vector<double>> weights; // nullopt = uniform
    KSpec k_spec;
    FrameSpec frame_spec;
    std::map<std::string, double> tolerances;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    /// Index of the first trial; lets a single failing trial be replayed.
    std::uint64_t first_trial = 0;
};

using Json = nlohmann::ordered_json;

Scenario scenario_from_json(const Json& doc);
Json scenario_to_json(const Scenario& s);

/// Reads and validates a config file. Throws ConfigError.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text);

/// A concrete (Omega, F, K) for one trial index.
struct Instance {
    SpaceRef space;
    KOperator k;
    SampledFrame frame;
};

Instance build_instance(const Scenario& s, std::uint64_t trial);

/// Built-in fixtures as scenarios ("W1", "W1p").
Scenario fixture_scenario(const std::string& name);

} // namespace kframe::cli
