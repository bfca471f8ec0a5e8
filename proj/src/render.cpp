#include "symnav/render.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "symnav/number_format.hpp"

namespace symnav {

namespace {

std::string num(double v) { return format_number(v); }

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

ViewBox track_view_box(const Track& track) {
    const auto [lo, hi] = track.extent();
    const double w = std::max(hi.x - lo.x, 1.0);
    const double h = std::max(hi.y - lo.y, 1.0);
    return {lo.x - 0.05 * w, -(hi.y + 0.05 * h), 1.1 * w, 1.1 * h};
}

std::string render_track_svg(const Track& track, const std::vector<TrajectoryPoint>& trajectory,
                             const ScanOverlay* scans) {
    const ViewBox vb = track_view_box(track);
    const double stroke = std::max(vb.width, vb.height) / 400.0;
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(vb.x) << ' ' << num(vb.y)
        << ' ' << num(vb.width) << ' ' << num(vb.height) << "\">\n"
        << "<title>" << escape(track.name()) << "</title>\n"
        << "<rect x=\"" << num(vb.x) << "\" y=\"" << num(vb.y) << "\" width=\"" << num(vb.width)
        << "\" height=\"" << num(vb.height) << "\" fill=\"white\"/>\n";

    svg << "<g stroke=\"black\" stroke-width=\"" << num(stroke) << "\" stroke-linecap=\"round\">\n";
    for (const Segment& s : track.walls()) {
        svg << "<line x1=\"" << num(s.a().x) << "\" y1=\"" << num(-s.a().y) << "\" x2=\""
            << num(s.b().x) << "\" y2=\"" << num(-s.b().y) << "\"/>\n";
    }
    svg << "</g>\n<g fill=\"gray\">\n";
    for (const Obstacle& o : track.obstacles()) {
        svg << "<rect x=\"" << num(o.center.x - o.width / 2) << "\" y=\""
            << num(-(o.center.y + o.height / 2)) << "\" width=\"" << num(o.width)
            << "\" height=\"" << num(o.height) << "\"/>\n";
    }
    svg << "</g>\n";

    if (scans != nullptr && scans->every > 0 && !scans->ranges.empty()) {
        svg << "<g stroke=\"orange\" stroke-width=\"" << num(stroke / 2) << "\">\n";
        const std::size_t rows = std::min(scans->ranges.size(), trajectory.size());
        for (std::size_t i = 0; i < rows; i += static_cast<std::size_t>(scans->every)) {
            const auto& r = scans->ranges[i];
            if (r.size() < 2) continue;
            // Each scan was taken at the pose before the recorded step.
            const VehicleState& pose = i == 0 ? VehicleState{track.start().x, track.start().y,
                                                             track.start_heading(), 0.0}
                                              : trajectory[i - 1].state;
            SensorSpec spec;
            spec.beam_count = static_cast<int>(r.size());
            spec.fov = scans->fov;
            for (int b = 0; b < spec.beam_count; ++b) {
                const double a = pose.theta - beam_offset(spec, b);
                const double d = r[static_cast<std::size_t>(b)];
                svg << "<line x1=\"" << num(pose.x) << "\" y1=\"" << num(-pose.y) << "\" x2=\""
                    << num(pose.x + d * std::cos(a)) << "\" y2=\""
                    << num(-(pose.y + d * std::sin(a))) << "\"/>\n";
            }
        }
        svg << "</g>\n";
    }

    if (!trajectory.empty()) {
        svg << "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"" << num(stroke)
            << "\" points=\"" << num(track.start().x) << ',' << num(-track.start().y);
        for (const TrajectoryPoint& p : trajectory) {
            svg << ' ' << num(p.state.x) << ',' << num(-p.state.y);
        }
        svg << "\"/>\n";
        const VehicleState& last = trajectory.back().state;
        svg << "<circle class=\"pose\" cx=\"" << num(last.x) << "\" cy=\"" << num(-last.y)
            << "\" r=\"" << num(3 * stroke) << "\" fill=\"blue\"/>\n";
    }

    const double marker = 4 * stroke;
    svg << "<circle class=\"start\" cx=\"" << num(track.start().x) << "\" cy=\""
        << num(-track.start().y) << "\" r=\"" << num(marker) << "\" fill=\"green\"/>\n"
        << "<circle class=\"destination\" cx=\"" << num(track.destination().x) << "\" cy=\""
        << num(-track.destination().y) << "\" r=\"" << num(marker) << "\" fill=\"red\"/>\n"
        << "</svg>\n";
    return svg.str();
}

std::string render_steering_svg(const std::vector<TrajectoryPoint>& trajectory) {
    constexpr double kWidth = 800.0;
    constexpr double kHeight = 300.0;
    constexpr double kMargin = 40.0;
    double limit = 1.0;
    int last_tick = 1;
    for (const TrajectoryPoint& p : trajectory) {
        limit = std::max(limit, std::abs(rad_to_deg(p.steer_command)));
        last_tick = std::max(last_tick, p.tick);
    }
    const double plot_w = kWidth - 2 * kMargin;
    const double plot_h = kHeight - 2 * kMargin;
    auto px = [&](int tick) { return kMargin + plot_w * tick / std::max(last_tick, 1); };
    auto py = [&](double deg) { return kMargin + plot_h * (0.5 - 0.5 * deg / limit); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << num(kWidth) << ' '
        << num(kHeight) << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
        << "\" fill=\"white\"/>\n"
        << "<g stroke=\"black\" stroke-width=\"1\">\n"
        << "<line x1=\"" << num(kMargin) << "\" y1=\"" << num(kMargin) << "\" x2=\""
        << num(kMargin) << "\" y2=\"" << num(kHeight - kMargin) << "\"/>\n"
        << "<line x1=\"" << num(kMargin) << "\" y1=\"" << num(py(0)) << "\" x2=\""
        << num(kWidth - kMargin) << "\" y2=\"" << num(py(0)) << "\"/>\n"
        << "</g>\n"
        << "<text x=\"" << num(kMargin) << "\" y=\"" << num(kMargin - 8)
        << "\" font-size=\"12\">steering (deg), max " << num(limit) << "</text>\n"
        << "<text x=\"" << num(kWidth - kMargin) << "\" y=\"" << num(kHeight - 12)
        << "\" font-size=\"12\" text-anchor=\"end\">tick " << last_tick << "</text>\n";
    if (!trajectory.empty()) {
        svg << "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < trajectory.size(); ++i) {
            if (i > 0) svg << ' ';
            svg << num(px(trajectory[i].tick)) << ','
                << num(py(rad_to_deg(trajectory[i].steer_command)));
        }
        svg << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::vector<std::vector<double>> read_scan_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line.rfind("tick", 0) != 0) {
        throw std::runtime_error(path + ": unexpected scan header");
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        std::vector<double> ranges;
        while (std::getline(ss, cell, ',')) {
            ranges.push_back(parse_number(cell));
        }
        rows.push_back(std::move(ranges));
    }
    return rows;
}

}  // namespace symnav
