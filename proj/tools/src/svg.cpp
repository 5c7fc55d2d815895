#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace crmadapt::cli {

namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 50.0;
constexpr std::size_t kMaxPoints = 2000;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace

void write_svg(const sim::SimTrace& trace, std::ostream& os) {
    const std::vector<const std::vector<double>*> series{&trace.y, &trace.ym, &trace.ey};
    const char* names[] = {"y", "y_m", "e_y"};
    const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c"};

    double lo = 0.0;
    double hi = 0.0;
    for (const auto* s : series) {
        for (double v : *s) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi - lo < 1e-12) {
        hi = lo + 1.0;
    }
    const double t0 = trace.t.empty() ? 0.0 : trace.t.front();
    const double t1 = trace.t.empty() ? 1.0 : std::max(trace.t.back(), t0 + 1e-12);
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    const auto px = [&](double t) { return kLeft + (t - t0) / (t1 - t0) * pw; };
    const auto py = [&](double v) { return kTop + (hi - v) / (hi - lo) * ph; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double t = t0 + (t1 - t0) * i / 5.0;
        const double v = lo + (hi - lo) * i / 5.0;
        os << "<text x=\"" << px(t) << "\" y=\"" << kHeight - kBottom + 18
           << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << fmt(v)
           << "</text>\n";
        os << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << py(v) << "\" y2=\""
           << py(v) << "\" stroke=\"#ddd\"/>\n";
    }
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10
       << "\" text-anchor=\"middle\">t [s]</text>\n";

    const std::size_t n = trace.size();
    const std::size_t stride = std::max<std::size_t>(1, n / kMaxPoints);
    for (std::size_t s = 0; s < series.size(); ++s) {
        os << "<polyline fill=\"none\" stroke=\"" << colors[s] << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t k = 0; k < n; k += stride) {
            os << fmt(px(trace.t[k])) << ',' << fmt(py((*series[s])[k])) << ' ';
        }
        if (n > 0 && (n - 1) % stride != 0) {
            os << fmt(px(trace.t[n - 1])) << ',' << fmt(py((*series[s])[n - 1]));
        }
        os << "\"/>\n";
        const double ly = kTop + 20.0 + 20.0 * static_cast<double>(s);
        os << "<line x1=\"" << kWidth - kRight + 15 << "\" x2=\"" << kWidth - kRight + 45 << "\" y1=\"" << ly
           << "\" y2=\"" << ly << "\" stroke=\"" << colors[s] << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << kWidth - kRight + 52 << "\" y=\"" << ly + 4 << "\">" << names[s] << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace crmadapt::cli
