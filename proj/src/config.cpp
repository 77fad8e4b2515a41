#include "vanishdamp/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "vanishdamp/csvio.hpp"

namespace vanishdamp {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& key, int line) {
    double out;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ConfigError("expected a number, got '" + v + "'", key, line);
    return out;
}

bool to_bool(const std::string& v, const std::string& key, int line) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("expected a boolean, got '" + v + "'", key, line);
}

} // namespace

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        double v;
        auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc() || res.ptr != item.data() + item.size())
            throw Error("bad number in list: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::string join_double_list(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += format_double(xs[i]);
    }
    return out;
}

ConfigFile ConfigFile::parse(const std::string& text) {
    ConfigFile cf;
    cf.sections_.push_back(Section{"", {}});
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("unterminated section header '" + s + "'", "", lineno);
            cf.sections_.push_back(Section{trim(s.substr(1, s.size() - 2)), {}});
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got '" + s + "'", "", lineno);
        Entry e{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), lineno};
        if (e.key.empty()) throw ConfigError("empty key", "", lineno);
        cf.sections_.back().entries.push_back(std::move(e));
    }
    return cf;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::string ConfigFile::serialize() const {
    std::string out;
    for (const auto& sec : sections_) {
        if (sec.entries.empty() && sec.name.empty()) continue;
        if (!sec.name.empty()) out += "[" + sec.name + "]\n";
        for (const auto& e : sec.entries) out += e.key + " = " + e.value + "\n";
        out += "\n";
    }
    return out;
}

std::optional<std::string> ConfigFile::get(const std::string& section,
                                           const std::string& key) const {
    for (const auto& sec : sections_)
        if (sec.name == section)
            for (const auto& e : sec.entries)
                if (e.key == key) return e.value;
    return std::nullopt;
}

int ConfigFile::line_of(const std::string& section, const std::string& key) const {
    for (const auto& sec : sections_)
        if (sec.name == section)
            for (const auto& e : sec.entries)
                if (e.key == key) return e.line;
    return 0;
}

void ConfigFile::set(const std::string& section, const std::string& key,
                     const std::string& value) {
    for (auto& sec : sections_)
        if (sec.name == section) {
            for (auto& e : sec.entries)
                if (e.key == key) {
                    e.value = value;
                    return;
                }
            sec.entries.push_back(Entry{key, value, 0});
            return;
        }
    sections_.push_back(Section{section, {Entry{key, value, 0}}});
}

std::map<std::string, std::string> ConfigFile::flat() const {
    std::map<std::string, std::string> m;
    for (const auto& sec : sections_)
        for (const auto& e : sec.entries) m[sec.name + "." + e.key] = e.value;
    return m;
}

bool ConfigFile::key_equivalent(const ConfigFile& other) const { return flat() == other.flat(); }

DampingSchedule ScheduleConfig::build() const {
    if (kind == "powerlaw") return DampingSchedule::power_law(K, alpha, t0);
    if (kind == "constant") return DampingSchedule::constant(constant, t0);
    if (kind == "none") return DampingSchedule::constant(0.0, t0);
    throw Error("unknown schedule kind: " + kind);
}

ProblemSpec CustomProblemConfig::build() const {
    if (n < 1) throw Error("custom problem needs n >= 1");
    if (static_cast<int>(matrix.size()) != n * n)
        throw Error("custom problem matrix needs n*n entries");
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = matrix[i * n + j];

    PotentialSpec pot = PotentialSpec::zero();
    if (potential == "quartic")
        pot = PotentialSpec::quartic(Vec::Constant(n, shift), weight);
    else if (potential == "logcosh")
        pot = PotentialSpec::log_cosh(Vec::Constant(n, shift), weight);
    else if (potential != "zero")
        throw Error("unknown potential kind: " + potential);

    ProblemSpec p;
    p.certified = CompositePotential::certify(OperatorSpec::dense(a, lambda), std::move(pot));
    p.id = "custom-" + std::to_string(n);
    Vec u0 = Vec::Zero(n), w0 = Vec::Zero(n);
    if (!init_u.empty()) {
        if (static_cast<int>(init_u.size()) != n) throw Error("init_u needs n entries");
        for (int i = 0; i < n; ++i) u0[i] = init_u[i];
    }
    if (!init_w.empty()) {
        if (static_cast<int>(init_w.size()) != n) throw Error("init_w needs n entries");
        for (int i = 0; i < n; ++i) w0[i] = init_w[i];
    }
    p.init = StateVector{0.0, std::move(u0), std::move(w0)};
    p.lipschitz_f = lipschitz_f;
    p.notes = {"custom"};
    return p;
}

RunConfig RunConfig::from_config(const ConfigFile& cf) {
    RunConfig rc;
    auto num = [&](const char* sec, const char* key, double& slot) {
        if (auto v = cf.get(sec, key)) slot = to_double(*v, std::string(sec) + "." + key,
                                                        cf.line_of(sec, key));
    };
    auto flag = [&](const char* sec, const char* key, bool& slot) {
        if (auto v = cf.get(sec, key)) slot = to_bool(*v, std::string(sec) + "." + key,
                                                      cf.line_of(sec, key));
    };

    if (auto v = cf.get("run", "problem")) rc.problem_id = *v;

    if (auto v = cf.get("schedule", "kind")) rc.schedule.kind = *v;
    num("schedule", "K", rc.schedule.K);
    num("schedule", "alpha", rc.schedule.alpha);
    num("schedule", "c", rc.schedule.constant);
    num("schedule", "t0", rc.schedule.t0);

    num("integrator", "h", rc.h);
    num("integrator", "t_end", rc.t_end);
    num("integrator", "sample_ratio", rc.sample_ratio);

    if (auto v = cf.get("accumulators", "weighted_energy_r")) {
        try {
            rc.weighted_energy_exponents = parse_double_list(*v);
        } catch (const Error& e) {
            throw ConfigError(e.what(), "accumulators.weighted_energy_r",
                              cf.line_of("accumulators", "weighted_energy_r"));
        }
    }
    if (auto v = cf.get("accumulators", "weighted_speed_q")) {
        try {
            rc.weighted_speed_exponents = parse_double_list(*v);
        } catch (const Error& e) {
            throw ConfigError(e.what(), "accumulators.weighted_speed_q",
                              cf.line_of("accumulators", "weighted_speed_q"));
        }
    }

    num("analysis", "fit_window_decades", rc.fit_window_decades);
    if (auto v = cf.get("analysis", "alpha_bar_probes"))
        rc.alpha_bar_probes = parse_double_list(*v);
    num("analysis", "saturation_theta", rc.saturation_theta);

    if (auto v = cf.get("output", "dir")) rc.out_dir = *v;
    flag("output", "emit_svg", rc.emit_svg);
    flag("output", "write_trajectory", rc.write_trajectory);

    flag("checks", "enabled", rc.checks_enabled);
    num("checks", "dissipation_tol_factor", rc.dissipation_tol_factor);
    num("checks", "anchor_tol_factor", rc.anchor_tol_factor);
    num("checks", "monotonicity_tol_factor", rc.monotonicity_tol_factor);

    if (auto v = cf.get("problem", "n")) {
        CustomProblemConfig cp;
        cp.n = static_cast<int>(to_double(*v, "problem.n", cf.line_of("problem", "n")));
        if (auto m = cf.get("problem", "matrix")) cp.matrix = parse_double_list(*m);
        num("problem", "lambda", cp.lambda);
        if (auto pk = cf.get("problem", "potential")) cp.potential = *pk;
        num("problem", "shift", cp.shift);
        num("problem", "weight", cp.weight);
        if (auto iu = cf.get("problem", "init_u")) cp.init_u = parse_double_list(*iu);
        if (auto iw = cf.get("problem", "init_w")) cp.init_w = parse_double_list(*iw);
        num("problem", "lipschitz_f", cp.lipschitz_f);
        rc.custom_problem = std::move(cp);
    }

    // validation, with the offending key in the message
    if (rc.schedule.kind == "powerlaw" &&
        (rc.schedule.alpha < 0.0 || rc.schedule.alpha >= 1.0))
        throw ConfigError("alpha must lie in [0, 1)", "schedule.alpha",
                          cf.line_of("schedule", "alpha"));
    if (!(rc.h > 0.0))
        throw ConfigError("h must be positive", "integrator.h", cf.line_of("integrator", "h"));
    if (!(rc.t_end > 0.0))
        throw ConfigError("t_end must be positive", "integrator.t_end",
                          cf.line_of("integrator", "t_end"));
    if (!(rc.sample_ratio > 1.0))
        throw ConfigError("sample_ratio must exceed 1", "integrator.sample_ratio",
                          cf.line_of("integrator", "sample_ratio"));
    for (double r : rc.weighted_energy_exponents)
        if (r == -1.0)
            throw ConfigError(
                "weighted-energy exponent r = -1 is excluded (the weight antiderivative "
                "degenerates there)",
                "accumulators.weighted_energy_r", cf.line_of("accumulators", "weighted_energy_r"));
    for (double ab : rc.alpha_bar_probes)
        if (rc.schedule.kind == "powerlaw" && ab >= rc.schedule.alpha)
            throw ConfigError("every alpha_bar probe must be < schedule alpha",
                              "analysis.alpha_bar_probes",
                              cf.line_of("analysis", "alpha_bar_probes"));
    if (!(rc.saturation_theta > 0.0 && rc.saturation_theta < 1.0))
        throw ConfigError("saturation_theta must lie in (0,1)", "analysis.saturation_theta",
                          cf.line_of("analysis", "saturation_theta"));
    return rc;
}

ConfigFile RunConfig::to_config() const {
    ConfigFile cf;
    cf.set("run", "problem", problem_id);
    cf.set("schedule", "kind", schedule.kind);
    if (schedule.kind == "powerlaw") {
        cf.set("schedule", "K", format_double(schedule.K));
        cf.set("schedule", "alpha", format_double(schedule.alpha));
    } else if (schedule.kind == "constant") {
        cf.set("schedule", "c", format_double(schedule.constant));
    }
    cf.set("schedule", "t0", format_double(schedule.t0));
    cf.set("integrator", "h", format_double(h));
    cf.set("integrator", "t_end", format_double(t_end));
    cf.set("integrator", "sample_ratio", format_double(sample_ratio));
    if (!weighted_energy_exponents.empty())
        cf.set("accumulators", "weighted_energy_r", join_double_list(weighted_energy_exponents));
    if (!weighted_speed_exponents.empty())
        cf.set("accumulators", "weighted_speed_q", join_double_list(weighted_speed_exponents));
    cf.set("analysis", "fit_window_decades", format_double(fit_window_decades));
    if (!alpha_bar_probes.empty())
        cf.set("analysis", "alpha_bar_probes", join_double_list(alpha_bar_probes));
    cf.set("analysis", "saturation_theta", format_double(saturation_theta));
    cf.set("output", "dir", out_dir);
    cf.set("output", "emit_svg", emit_svg ? "true" : "false");
    cf.set("output", "write_trajectory", write_trajectory ? "true" : "false");
    cf.set("checks", "enabled", checks_enabled ? "true" : "false");
    cf.set("checks", "dissipation_tol_factor", format_double(dissipation_tol_factor));
    cf.set("checks", "anchor_tol_factor", format_double(anchor_tol_factor));
    cf.set("checks", "monotonicity_tol_factor", format_double(monotonicity_tol_factor));
    return cf;
}

ProblemSpec RunConfig::resolve_problem() const {
    if (custom_problem) return custom_problem->build();
    return catalog_problem(problem_id);
}

SweepConfig SweepConfig::from_config(const ConfigFile& cf) {
    SweepConfig sc;
    sc.base = RunConfig::from_config(cf);
    if (auto v = cf.get("sweep", "problems")) {
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) sc.problems.push_back(item);
        }
    }
    if (sc.problems.empty()) sc.problems.push_back(sc.base.problem_id);
    if (auto v = cf.get("sweep", "alphas"))
        sc.alphas = parse_double_list(*v);
    if (sc.alphas.empty()) sc.alphas.push_back(sc.base.schedule.alpha);
    if (auto v = cf.get("sweep", "Ks")) sc.Ks = parse_double_list(*v);
    if (sc.Ks.empty()) sc.Ks.push_back(1.0);
    if (auto v = cf.get("sweep", "workers"))
        sc.workers = static_cast<int>(to_double(*v, "sweep.workers", cf.line_of("sweep", "workers")));
    for (double a : sc.alphas)
        if (a < 0.0 || a >= 1.0)
            throw ConfigError("sweep alphas must lie in [0,1)", "sweep.alphas",
                              cf.line_of("sweep", "alphas"));
    return sc;
}

} // namespace vanishdamp
