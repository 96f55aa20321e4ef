#pragma once

// Line-oriented run configuration:
//
//   [section]
//   key = value        # trailing comment
//
// Complex values are written "re,im"; angles are in radians.

#include "optocirc/core_model.hpp"
#include "optocirc/scattering.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace optocirc {

// The fiber link is given by magnitude J and phase φ; lm.cJ = J e^{-iφ}.
struct LinearizedConfig {
    LinearizedModel lm;
    double J = 0.0;
    double phi = pi / 2.0;

    friend bool operator==(const LinearizedConfig&, const LinearizedConfig&) = default;
};

struct SweepConfig {
    std::vector<SweepAxis> axes;
    std::string metric;
    unsigned threads = 0;

    friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct BellConfig {
    double theta_min = 0.0;
    double theta_max = pi;
    std::size_t theta_n = 181;
    double alpha2_min = 0.0;
    double alpha2_max = 1.0;
    std::size_t alpha2_n = 101;
    int n_trunc = 20;
    double oracle_theta = 0.4636476090008061;  // arctan(1/2)

    friend bool operator==(const BellConfig&, const BellConfig&) = default;
};

struct SearchConfig {
    std::optional<double> magnitude;  // defaults to G10 of the phenomenological section
    std::size_t phase_points = 360;
    std::size_t omega_points = 2001;

    friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

struct SolverConfig {
    double tol = 1e-12;
    int max_iter = 10000;
    double validity_threshold = 0.2;

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct OutputConfig {
    std::string path;  // empty: standard output
    std::string format = "csv";

    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct RunConfig {
    std::optional<PhysicalParams> physical;
    std::optional<PhenomenologicalTemplate> phenomenological;
    std::optional<LinearizedConfig> linearized;
    std::optional<FrequencyGrid> grid;
    std::optional<SweepConfig> sweep;
    std::optional<BellConfig> bell;
    std::optional<SearchConfig> search;
    std::optional<SolverConfig> solver;
    std::optional<OutputConfig> output;

    friend bool operator==(const RunConfig& a, const RunConfig& b);
};

bool operator==(const PhenomenologicalTemplate& a, const PhenomenologicalTemplate& b);

// Throws ConfigError naming the line for syntax errors, unknown sections or
// keys (with a closest-match suggestion), duplicates and missing keys.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

// "lo:hi:n" as used by --grid.
FrequencyGrid parse_grid_spec(const std::string& spec);

// Closest candidate by edit distance, or empty when nothing is near.
std::string closest_match(const std::string& word, const std::vector<std::string>& candidates);

} // namespace optocirc
