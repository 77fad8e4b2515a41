#include "vanishdamp/csvio.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "vanishdamp/errors.hpp"

namespace vanishdamp {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& field, int line) {
    double out;
    auto res = std::from_chars(field.data(), field.data() + field.size(), out);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw Error("bad numeric field '" + field + "' on csv line " + std::to_string(line));
    return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(sep, pos);
        out.push_back(line.substr(pos, next == std::string::npos ? next : next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

} // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    const auto& echo = traj.echo();
    os << "t,E,speed_sq,gamma,phi_gap,dissipation";
    for (double r : echo.weighted_energy_exponents) os << ",wE_r" << format_double(r);
    for (double q : echo.weighted_speed_exponents) os << ",wS_q" << format_double(q);
    os << ",p,dp\n";
    for (const auto& s : traj.samples()) {
        os << format_double(s.state.t) << ',' << format_double(s.energy.E) << ','
           << format_double(s.energy.speed_sq) << ',' << format_double(s.energy.gamma_t) << ','
           << format_double(s.energy.phi_gap) << ',' << format_double(s.acc.dissipation);
        for (double v : s.acc.weighted_energy) os << ',' << format_double(v);
        for (double v : s.acc.weighted_speed) os << ',' << format_double(v);
        os << ',' << format_double(s.acc.p) << ',' << format_double(s.acc.dp) << '\n';
    }
}

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    write_trajectory_csv(traj, os);
    return os.str();
}

Trajectory read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw Error("empty trajectory csv");
    auto header = split(line, ',');
    if (header.size() < 8 || header[0] != "t" || header[1] != "E")
        throw Error("unrecognized trajectory csv header");

    TrajectoryEcho echo;
    std::size_t col = 6;
    while (col < header.size() && header[col].rfind("wE_r", 0) == 0)
        echo.weighted_energy_exponents.push_back(parse_double(header[col++].substr(4), 1));
    while (col < header.size() && header[col].rfind("wS_q", 0) == 0)
        echo.weighted_speed_exponents.push_back(parse_double(header[col++].substr(4), 1));
    if (col + 2 != header.size() || header[col] != "p" || header[col + 1] != "dp")
        throw Error("unrecognized trajectory csv header tail");

    std::vector<TrajectorySample> samples;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto f = split(line, ',');
        if (f.size() != header.size())
            throw Error("csv line " + std::to_string(lineno) + " has " +
                        std::to_string(f.size()) + " fields, expected " +
                        std::to_string(header.size()));
        TrajectorySample s;
        std::size_t i = 0;
        s.state.t = parse_double(f[i++], lineno);
        s.energy.t = s.state.t;
        s.energy.E = parse_double(f[i++], lineno);
        s.energy.speed_sq = parse_double(f[i++], lineno);
        s.energy.gamma_t = parse_double(f[i++], lineno);
        s.energy.phi_gap = parse_double(f[i++], lineno);
        s.acc.dissipation = parse_double(f[i++], lineno);
        for (std::size_t k = 0; k < echo.weighted_energy_exponents.size(); ++k)
            s.acc.weighted_energy.push_back(parse_double(f[i++], lineno));
        for (std::size_t k = 0; k < echo.weighted_speed_exponents.size(); ++k)
            s.acc.weighted_speed.push_back(parse_double(f[i++], lineno));
        s.acc.p = parse_double(f[i++], lineno);
        s.acc.dp = parse_double(f[i++], lineno);
        samples.push_back(std::move(s));
    }
    if (!samples.empty()) echo.t_end = samples.back().state.t;
    return Trajectory(std::move(samples), std::move(echo));
}

} // namespace vanishdamp
