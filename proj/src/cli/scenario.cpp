#include "kframe/cli/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "kframe/random.hpp"

namespace kframe::cli {

ConfigError::ConfigError(std::string path, const std::string& message)
    : std::runtime_error(path.empty() ? "config error: " + message
                                      : "config error at " + path + ": " + message),
      path_(std::move(path)) {}

namespace {

std::string key_path(const std::string& parent, const std::string& key) {
    return parent + "." + key;
}

std::string index_path(const std::string& parent, std::size_t i) {
    return parent + "[" + std::to_string(i) + "]";
}

const Json& require(const Json& obj, const std::string& parent, const std::string& key) {
    if (!obj.contains(key)) {
        throw ConfigError(key_path(parent, key), "missing required field \"" + key + "\"");
    }
    return obj.at(key);
}

void reject_unknown(const Json& obj, const std::string& path, const std::set<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.contains(it.key())) {
            throw ConfigError(key_path(path, it.key()), "unknown field \"" + it.key() + "\"");
        }
    }
}

std::uint64_t read_uint(const Json& v, const std::string& path) {
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_integer()) {
        throw ConfigError(path, "must be a non-negative integer");
    }
    throw ConfigError(path, "must be an integer");
}

std::size_t read_count(const Json& v, const std::string& path, std::size_t min_value) {
    const std::uint64_t n = read_uint(v, path);
    if (n < min_value) {
        throw ConfigError(path, "must be at least " + std::to_string(min_value));
    }
    return static_cast<std::size_t>(n);
}

double read_real(const Json& v, const std::string& path) {
    if (!v.is_number()) {
        throw ConfigError(path, "must be a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError(path, "must be finite");
    }
    return x;
}

// A complex scalar is either a real number or an [re, im] pair.
Scalar read_scalar(const Json& v, const std::string& path) {
    if (v.is_number()) {
        return {read_real(v, path), 0.0};
    }
    if (v.is_array() && v.size() == 2) {
        return {read_real(v[0], index_path(path, 0)), read_real(v[1], index_path(path, 1))};
    }
    throw ConfigError(path, "must be a number or an [re, im] pair");
}

Json write_scalar(Scalar z) { return Json::array({z.real(), z.imag()}); }

// rows x cols matrix given as an array of `rows` arrays of `cols` scalars.
Matrix read_matrix(const Json& v, const std::string& path, std::size_t rows, std::size_t cols) {
    if (!v.is_array() || v.size() != rows) {
        throw ConfigError(path, "must be an array of " + std::to_string(rows) + " rows");
    }
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        const std::string row_path = index_path(path, i);
        const Json& row = v[i];
        if (!row.is_array() || row.size() != cols) {
            throw ConfigError(row_path, "must hold " + std::to_string(cols) + " scalars");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                read_scalar(row[j], index_path(row_path, j));
        }
    }
    return m;
}

Json write_rows(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(write_scalar(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string read_kind(const Json& obj, const std::string& path) {
    const Json& kind = require(obj, path, "kind");
    if (!kind.is_string()) {
        throw ConfigError(key_path(path, "kind"), "must be a string");
    }
    return kind.get<std::string>();
}

KSpec read_k_spec(const Json& v, const std::string& path, std::size_t d) {
    if (!v.is_object()) {
        throw ConfigError(path, "must be an object with a \"kind\" field");
    }
    KSpec k;
    const std::string kind = read_kind(v, path);
    if (kind == "identity") {
        reject_unknown(v, path, {"kind"});
        k.kind = KSpec::Kind::Identity;
    } else if (kind == "diagonal") {
        reject_unknown(v, path, {"kind", "values"});
        k.kind = KSpec::Kind::Diagonal;
        const std::string vp = key_path(path, "values");
        const Json& values = require(v, path, "values");
        if (!values.is_array() || values.size() != d) {
            throw ConfigError(vp, "must hold dim = " + std::to_string(d) + " scalars");
        }
        for (std::size_t i = 0; i < d; ++i) {
            k.values.push_back(read_scalar(values[i], index_path(vp, i)));
        }
    } else if (kind == "random-rank") {
        reject_unknown(v, path, {"kind", "rank", "seed"});
        k.kind = KSpec::Kind::RandomRank;
        k.rank = read_count(require(v, path, "rank"), key_path(path, "rank"), 0);
        if (k.rank > d) {
            throw ConfigError(key_path(path, "rank"), "rank must not exceed dim");
        }
        k.seed = read_uint(require(v, path, "seed"), key_path(path, "seed"));
    } else if (kind == "explicit") {
        reject_unknown(v, path, {"kind", "matrix"});
        k.kind = KSpec::Kind::Explicit;
        k.matrix = read_matrix(require(v, path, "matrix"), key_path(path, "matrix"), d, d);
    } else {
        throw ConfigError(key_path(path, "kind"),
                          "unknown kind \"" + kind +
                              "\" (expected identity, diagonal, random-rank, explicit)");
    }
    return k;
}

FrameSpec read_frame_spec(const Json& v, const std::string& path, std::size_t d, std::size_t m) {
    if (!v.is_object()) {
        throw ConfigError(path, "must be an object with a \"kind\" field");
    }
    FrameSpec f;
    const std::string kind = read_kind(v, path);
    if (kind == "generate-parseval-k" || kind == "random-bessel") {
        reject_unknown(v, path, {"kind", "seed"});
        f.kind = kind == "random-bessel" ? FrameSpec::Kind::RandomBessel
                                         : FrameSpec::Kind::GenerateParsevalK;
        f.seed = read_uint(require(v, path, "seed"), key_path(path, "seed"));
    } else if (kind == "explicit") {
        reject_unknown(v, path, {"kind", "samples"});
        f.kind = FrameSpec::Kind::Explicit;
        // One row per atom in the file; stored with one column per atom.
        f.samples = read_matrix(require(v, path, "samples"), key_path(path, "samples"), m, d)
                        .transpose();
    } else {
        throw ConfigError(key_path(path, "kind"),
                          "unknown kind \"" + kind +
                              "\" (expected generate-parseval-k, explicit, random-bessel)");
    }
    return f;
}

std::string k_kind_name(KSpec::Kind k) {
    switch (k) {
    case KSpec::Kind::Identity: return "identity";
    case KSpec::Kind::Diagonal: return "diagonal";
    case KSpec::Kind::RandomRank: return "random-rank";
    case KSpec::Kind::Explicit: return "explicit";
    }
    return "identity";
}

std::string frame_kind_name(FrameSpec::Kind k) {
    switch (k) {
    case FrameSpec::Kind::GenerateParsevalK: return "generate-parseval-k";
    case FrameSpec::Kind::Explicit: return "explicit";
    case FrameSpec::Kind::RandomBessel: return "random-bessel";
    }
    return "generate-parseval-k";
}

} // namespace

Scenario scenario_from_json(const Json& doc) {
    const std::string root = "$";
    if (!doc.is_object()) {
        throw ConfigError(root, "top level must be an object");
    }
    reject_unknown(doc, root,
                   {"dim", "atoms", "weights", "k_spec", "frame_spec", "tolerances", "trials",
                    "seed", "first_trial"});
    Scenario s;
    s.dim = read_count(require(doc, root, "dim"), "$.dim", 1);
    s.atoms = read_count(require(doc, root, "atoms"), "$.atoms", 1);

    const Json& weights = require(doc, root, "weights");
    if (weights.is_string()) {
        if (weights.get<std::string>() != "uniform") {
            throw ConfigError("$.weights", "must be \"uniform\" or an array of positive reals");
        }
    } else if (weights.is_array()) {
        if (weights.size() != s.atoms) {
            throw ConfigError("$.weights",
                              "must hold atoms = " + std::to_string(s.atoms) + " entries");
        }
        std::vector<double> w;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            const double x = read_real(weights[i], index_path("$.weights", i));
            if (!(x > 0.0)) {
                throw ConfigError(index_path("$.weights", i), "weights must be positive");
            }
            w.push_back(x);
        }
        s.weights = std::move(w);
    } else {
        throw ConfigError("$.weights", "must be \"uniform\" or an array of positive reals");
    }

    s.k_spec = read_k_spec(require(doc, root, "k_spec"), "$.k_spec", s.dim);
    s.frame_spec = read_frame_spec(require(doc, root, "frame_spec"), "$.frame_spec", s.dim, s.atoms);

    if (doc.contains("tolerances")) {
        const Json& tol = doc.at("tolerances");
        if (!tol.is_object()) {
            throw ConfigError("$.tolerances", "must be an object of property id -> tolerance");
        }
        for (auto it = tol.begin(); it != tol.end(); ++it) {
            const std::string p = key_path("$.tolerances", it.key());
            const double x = read_real(it.value(), p);
            if (!(x > 0.0)) {
                throw ConfigError(p, "tolerance must be positive");
            }
            s.tolerances[it.key()] = x;
        }
    }
    s.trials = read_count(require(doc, root, "trials"), "$.trials", 0);
    s.seed = read_uint(require(doc, root, "seed"), "$.seed");
    if (doc.contains("first_trial")) {
        s.first_trial = read_uint(doc.at("first_trial"), "$.first_trial");
    }
    try {
        (void)build_instance(s, s.first_trial);
    } catch (const Infeasible& e) {
        throw ConfigError("$.atoms", e.what());
    } catch (const InvalidInput& e) {
        throw ConfigError("$", e.what());
    }
    return s;
}

Json scenario_to_json(const Scenario& s) {
    Json doc;
    doc["dim"] = s.dim;
    doc["atoms"] = s.atoms;
    if (s.weights) {
        doc["weights"] = *s.weights;
    } else {
        doc["weights"] = "uniform";
    }
    Json k;
    k["kind"] = k_kind_name(s.k_spec.kind);
    switch (s.k_spec.kind) {
    case KSpec::Kind::Identity: break;
    case KSpec::Kind::Diagonal: {
        Json values = Json::array();
        for (const Scalar z : s.k_spec.values) {
            values.push_back(write_scalar(z));
        }
        k["values"] = std::move(values);
        break;
    }
    case KSpec::Kind::RandomRank:
        k["rank"] = s.k_spec.rank;
        k["seed"] = s.k_spec.seed;
        break;
    case KSpec::Kind::Explicit: k["matrix"] = write_rows(s.k_spec.matrix); break;
    }
    doc["k_spec"] = std::move(k);

    Json f;
    f["kind"] = frame_kind_name(s.frame_spec.kind);
    if (s.frame_spec.kind == FrameSpec::Kind::Explicit) {
        f["samples"] = write_rows(s.frame_spec.samples.transpose());
    } else {
        f["seed"] = s.frame_spec.seed;
    }
    doc["frame_spec"] = std::move(f);

    Json tol = Json::object();
    for (const auto& [id, value] : s.tolerances) {
        tol[id] = value;
    }
    doc["tolerances"] = std::move(tol);
    doc["trials"] = s.trials;
    doc["seed"] = s.seed;
    doc["first_trial"] = s.first_trial;
    return doc;
}

Scenario parse_scenario(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", std::string("parse error: ") + e.what());
    }
    return scenario_from_json(doc);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot open config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

Instance build_instance(const Scenario& s, std::uint64_t trial) {
    SpaceRef space = make_space(s.weights ? MeasureSpace(*s.weights)
                                          : MeasureSpace::uniform(s.atoms));
    const KOperator k = [&] {
        switch (s.k_spec.kind) {
        case KSpec::Kind::Identity: return KOperator::identity(s.dim);
        case KSpec::Kind::Diagonal: {
            Vector v(static_cast<Eigen::Index>(s.dim));
            for (std::size_t i = 0; i < s.dim; ++i) {
                v(static_cast<Eigen::Index>(i)) = s.k_spec.values[i];
            }
            return KOperator(LinOperator::diagonal(v));
        }
        case KSpec::Kind::RandomRank:
            return generate_random_k(s.dim, s.k_spec.rank, derive_seed(s.k_spec.seed, trial));
        case KSpec::Kind::Explicit: return KOperator(LinOperator(s.k_spec.matrix));
        }
        return KOperator::identity(s.dim);
    }();

    switch (s.frame_spec.kind) {
    case FrameSpec::Kind::Explicit:
        return {space, k, SampledFrame(space, s.frame_spec.samples)};
    case FrameSpec::Kind::RandomBessel:
        return {space, k,
                generate_random_bessel(s.dim, s.atoms, space,
                                       derive_seed(s.frame_spec.seed, trial))};
    case FrameSpec::Kind::GenerateParsevalK:
        return {space, k,
                generate_parseval_k_frame(k, s.atoms, space,
                                          derive_seed(s.frame_spec.seed, trial))};
    }
    throw ConfigError("$.frame_spec.kind", "unsupported frame kind");
}

Scenario fixture_scenario(const std::string& name) {
    FrameFixture fx = [&] {
        if (name == "W1") {
            return fixture_w1();
        }
        if (name == "W1p") {
            return fixture_w1_prime();
        }
        throw ConfigError("--name", "unknown fixture \"" + name + "\" (expected W1 or W1p)");
    }();
    Scenario s;
    s.dim = fx.frame.dim();
    s.atoms = fx.frame.atoms();
    s.k_spec.kind = KSpec::Kind::Diagonal;
    for (Eigen::Index i = 0; i < fx.k.mat().rows(); ++i) {
        s.k_spec.values.push_back(fx.k.mat()(i, i));
    }
    s.frame_spec.kind = FrameSpec::Kind::Explicit;
    s.frame_spec.samples = fx.frame.samples();
    s.trials = 100;
    s.seed = 7;
    return s;
}

} // namespace kframe::cli
