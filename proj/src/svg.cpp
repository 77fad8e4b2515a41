#include "vanishdamp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "vanishdamp/csvio.hpp"

namespace vanishdamp {

namespace {
constexpr double W = 640, H = 480;
constexpr double ML = 70, MR = 20, MT = 20, MB = 50;  // margins
} // namespace

void write_loglog_svg(const Trajectory& traj, std::span<const double> alpha_bar_probes,
                      std::ostream& os) {
    std::vector<std::pair<double, double>> pts;  // (log10 t, log10 E)
    for (const auto& s : traj.samples()) {
        if (s.state.t < 1.0 || s.energy.E <= 1e-300) continue;
        pts.emplace_back(std::log10(s.state.t), std::log10(s.energy.E));
    }

    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";

    if (pts.size() < 2) {
        os << "<text x='40' y='40' font-size='14'>energy underflowed or too few samples; "
              "no log-log plot</text>\n</svg>\n";
        return;
    }

    double x0 = pts.front().first, x1 = pts.back().first;
    double y0 = 1e300, y1 = -1e300;
    for (auto& p : pts) {
        y0 = std::min(y0, p.second);
        y1 = std::max(y1, p.second);
    }
    if (x1 - x0 < 1e-9) x1 = x0 + 1;
    if (y1 - y0 < 1e-9) y1 = y0 + 1;
    const double padY = 0.05 * (y1 - y0);
    y0 -= padY;
    y1 += padY;

    auto px = [&](double x) { return ML + (x - x0) / (x1 - x0) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (y - y0) / (y1 - y0) * (H - MT - MB); };

    // decade grid
    for (int d = static_cast<int>(std::ceil(x0)); d <= static_cast<int>(std::floor(x1)); ++d) {
        os << "<line x1='" << px(d) << "' y1='" << py(y0) << "' x2='" << px(d) << "' y2='"
           << py(y1) << "' stroke='#dddddd'/>\n";
        os << "<text x='" << px(d) - 12 << "' y='" << H - MB + 18
           << "' font-size='11'>1e" << d << "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(y0)); d <= static_cast<int>(std::floor(y1)); ++d) {
        os << "<line x1='" << px(x0) << "' y1='" << py(d) << "' x2='" << px(x1) << "' y2='"
           << py(d) << "' stroke='#dddddd'/>\n";
        os << "<text x='8' y='" << py(d) + 4 << "' font-size='11'>1e" << d << "</text>\n";
    }

    // reference slopes through the first tail point
    auto guide = [&](double slope, const char* color, const std::string& label) {
        const double xa = pts.front().first, ya = pts.front().second;
        const double yb = ya + slope * (x1 - xa);
        os << "<line x1='" << px(xa) << "' y1='" << py(ya) << "' x2='" << px(x1) << "' y2='"
           << py(std::clamp(yb, y0, y1)) << "' stroke='" << color
           << "' stroke-dasharray='6,4'/>\n";
        os << "<text x='" << W - MR - 120 << "' y='" << py(std::clamp(yb, y0, y1)) - 4
           << "' font-size='11' fill='" << color << "'>" << label << "</text>\n";
    };
    guide(-1.0, "#cc7700", "slope -1");
    for (double ab : alpha_bar_probes)
        guide(-(1.0 + ab), "#cc0077", "slope -" + format_double(1.0 + ab));

    os << "<polyline fill='none' stroke='#003399' stroke-width='1.5' points='";
    for (auto& p : pts) os << px(p.first) << ',' << py(p.second) << ' ';
    os << "'/>\n";
    os << "<text x='" << W / 2 - 40 << "' y='" << H - 12 << "' font-size='12'>log10 t</text>\n";
    os << "<text x='12' y='" << MT + 4 << "' font-size='12'>log10 E</text>\n";
    os << "</svg>\n";
}

} // namespace vanishdamp
