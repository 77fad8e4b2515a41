#ifndef VANISHDAMP_CONFIG_HPP
#define VANISHDAMP_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vanishdamp/damping.hpp"
#include "vanishdamp/problems.hpp"

namespace vanishdamp {

/// Flat, sectioned key-value text file ([section] headers, key = value
/// lines, '#' comments). Order-preserving so serialization is diff-friendly.
class ConfigFile {
public:
    struct Entry {
        std::string key, value;
        int line = 0;
    };
    struct Section {
        std::string name;
        std::vector<Entry> entries;
    };

    static ConfigFile parse(const std::string& text);
    static ConfigFile load(const std::string& path);
    std::string serialize() const;

    std::optional<std::string> get(const std::string& section, const std::string& key) const;
    int line_of(const std::string& section, const std::string& key) const;
    void set(const std::string& section, const std::string& key, const std::string& value);

    /// Same key set and values, ignoring ordering, blank lines and comments.
    bool key_equivalent(const ConfigFile& other) const;

    const std::vector<Section>& sections() const { return sections_; }

private:
    std::map<std::string, std::string> flat() const;
    std::vector<Section> sections_;
};

struct ScheduleConfig {
    std::string kind = "powerlaw";  // powerlaw | constant | none
    double K = 1.0;
    double alpha = 0.5;
    double constant = 1.0;
    double t0 = 0.0;

    DampingSchedule build() const;
};

/// Inline problem definition: dense row-major matrix plus a named potential.
struct CustomProblemConfig {
    int n = 0;
    std::vector<double> matrix;  // row-major, n*n
    double lambda = 0.0;
    std::string potential = "zero";  // zero | quartic | logcosh
    double shift = 0.0;
    double weight = 1.0;
    std::vector<double> init_u, init_w;
    double lipschitz_f = 0.0;

    ProblemSpec build() const;
};

struct RunConfig {
    std::string problem_id = "scalar-harmonic";
    std::optional<CustomProblemConfig> custom_problem;
    ScheduleConfig schedule;

    double h = 1e-3;
    double t_end = 1e3;
    double sample_ratio = 1.05;

    std::vector<double> weighted_energy_exponents;  // r, never -1
    std::vector<double> weighted_speed_exponents;   // q

    double fit_window_decades = 1.0;
    std::vector<double> alpha_bar_probes;  // each < schedule alpha
    double saturation_theta = 0.05;

    std::string out_dir = "out";
    bool emit_svg = false;
    bool write_trajectory = true;

    bool checks_enabled = true;
    double dissipation_tol_factor = 1e-6;   // residual <= factor * E(0) * t_end
    double anchor_tol_factor = 1e-6;        // violation <= factor * (1 + E(0))
    double monotonicity_tol_factor = 10.0;  // uphill rate <= factor * h^2 * (1+E0) * (||A||+L)

    /// Parses and validates; throws ConfigError naming the offending key.
    static RunConfig from_config(const ConfigFile& cf);
    ConfigFile to_config() const;

    ProblemSpec resolve_problem() const;
};

struct SweepConfig {
    RunConfig base;
    std::vector<std::string> problems;
    std::vector<double> alphas;
    std::vector<double> Ks = {1.0};
    int workers = 0;  // 0: hardware concurrency

    static SweepConfig from_config(const ConfigFile& cf);
};

std::vector<double> parse_double_list(const std::string& text);
std::string join_double_list(const std::vector<double>& xs);

} // namespace vanishdamp

#endif
