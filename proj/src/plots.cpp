/*
 Copyright 2026 The flipopt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "flipopt/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "flipopt/error.hpp"
#include "flipopt/io.hpp"

namespace flipopt {
namespace {

using Series = std::vector<double>;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(const Series& s) {
        for (double v : s)
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
    }
    void pad() {
        if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
        if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double m = 0.05 * (hi - lo);
        lo -= m;
        hi += m;
    }
};

struct Panel {
    double x0, y0, w, h;  // pixel box of the plotting area
    Range xr, yr;

    double px(double x) const { return x0 + (x - xr.lo) / (xr.hi - xr.lo) * w; }
    double py(double y) const { return y0 + h - (y - yr.lo) / (yr.hi - yr.lo) * h; }
};

class Svg {
public:
    Svg(int width, int height) : width_(width), height_(height) {}

    void panel(const Panel& p, const std::string& title, const std::string& xlabel,
               const std::string& ylabel) {
        body_ += "<rect x=\"" + num(p.x0) + "\" y=\"" + num(p.y0) + "\" width=\"" + num(p.w) +
                 "\" height=\"" + num(p.h) + "\" fill=\"none\" stroke=\"#444\"/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double fx = p.xr.lo + (p.xr.hi - p.xr.lo) * i / 4.0;
            const double fy = p.yr.lo + (p.yr.hi - p.yr.lo) * i / 4.0;
            const double X = p.px(fx), Y = p.py(fy);
            body_ += "<line x1=\"" + num(X) + "\" y1=\"" + num(p.y0 + p.h) + "\" x2=\"" + num(X) +
                     "\" y2=\"" + num(p.y0 + p.h + 4) + "\" stroke=\"#444\"/>\n";
            body_ += "<text x=\"" + num(X) + "\" y=\"" + num(p.y0 + p.h + 16) +
                     "\" font-size=\"10\" text-anchor=\"middle\">" + num(fx) + "</text>\n";
            body_ += "<line x1=\"" + num(p.x0 - 4) + "\" y1=\"" + num(Y) + "\" x2=\"" + num(p.x0) +
                     "\" y2=\"" + num(Y) + "\" stroke=\"#444\"/>\n";
            body_ += "<text x=\"" + num(p.x0 - 6) + "\" y=\"" + num(Y + 3) +
                     "\" font-size=\"10\" text-anchor=\"end\">" + num(fy) + "</text>\n";
        }
        body_ += "<text x=\"" + num(p.x0 + p.w / 2) + "\" y=\"" + num(p.y0 - 8) +
                 "\" font-size=\"13\" text-anchor=\"middle\">" + esc(title) + "</text>\n";
        body_ += "<text x=\"" + num(p.x0 + p.w / 2) + "\" y=\"" + num(p.y0 + p.h + 32) +
                 "\" font-size=\"11\" text-anchor=\"middle\">" + esc(xlabel) + "</text>\n";
        body_ += "<text transform=\"translate(" + num(p.x0 - 52) + "," + num(p.y0 + p.h / 2) +
                 ") rotate(-90)\" font-size=\"11\" text-anchor=\"middle\">" + esc(ylabel) +
                 "</text>\n";
    }

    void polyline(const Panel& p, const Series& xs, const Series& ys, const char* colour) {
        std::string pts;
        auto flush = [&] {
            if (!pts.empty())
                body_ += "<polyline fill=\"none\" stroke=\"" + std::string(colour) +
                         "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
            pts.clear();
        };
        for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
            if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
                flush();
                continue;
            }
            pts += num(p.px(xs[i])) + "," + num(p.py(ys[i])) + " ";
        }
        flush();
    }

    void segment(double x1, double y1, double x2, double y2, const char* colour, double width) {
        body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
                 "\" y2=\"" + num(y2) + "\" stroke=\"" + colour + "\" stroke-width=\"" +
                 num(width) + "\"/>\n";
    }

    void marker(double x, double y, const char* colour) {
        body_ += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"3\" fill=\"" + colour +
                 "\"/>\n";
    }

    std::string str() const {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width_) +
               "\" height=\"" + std::to_string(height_) + "\" font-family=\"sans-serif\">\n" +
               "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
    }

private:
    int width_, height_;
    std::string body_;
};

struct Chart {
    std::string title, ylabel;
    Series y;
};

// Grid of time-history panels, `cols` wide.
std::string time_grid(const Series& t, const std::vector<Chart>& charts, int cols) {
    const int rows = static_cast<int>((charts.size() + cols - 1) / cols);
    const double pw = 300, ph = 170, mx = 80, my = 40, gapx = 90, gapy = 75;
    Svg svg(static_cast<int>(mx + cols * (pw + gapx)), static_cast<int>(my + rows * (ph + gapy)));
    for (std::size_t i = 0; i < charts.size(); ++i) {
        const int r = static_cast<int>(i) / cols, c = static_cast<int>(i) % cols;
        Panel p{mx + c * (pw + gapx), my + r * (ph + gapy), pw, ph, {}, {}};
        p.xr.add(t);
        p.yr.add(charts[i].y);
        p.xr.pad();
        p.yr.pad();
        svg.panel(p, charts[i].title, "t [s]", charts[i].ylabel);
        svg.polyline(p, t, charts[i].y, "#1f5fa8");
    }
    return svg.str();
}

const Series& need(const CsvTable& t, const char* name) {
    const Series* s = t.column(name);
    if (!s) throw ConfigError(name, "trajectory.csv is missing column '" + std::string(name) + "'");
    return *s;
}

}  // namespace

PlotReport emit_plots(const std::string& run_dir) {
    namespace fs = std::filesystem;
    const fs::path dir(run_dir);
    const fs::path traj_path = dir / "trajectory.csv";
    if (!fs::exists(traj_path)) throw ConfigError("trajectory", "no trajectory.csv in " + run_dir);
    const CsvTable t = parse_csv(read_file(traj_path.string()), traj_path.string());
    if (t.rows() == 0) throw ConfigError("trajectory", "trajectory.csv has no rows");

    const Series& time = need(t, "t_s");
    const Series& x = need(t, "x_m");
    const Series& y = need(t, "y_m");
    const Series& theta = need(t, "theta_deg");
    const Series& u = need(t, "u_mps");
    const Series& v = need(t, "v_mps");
    const Series& omega = need(t, "omega_radps");
    const Series& mass = need(t, "mass_kg");
    const Series& delta_d = need(t, "delta_d_deg");
    const Series& alpha = need(t, "alpha_deg");
    const Series& thrust = need(t, "thrust_N");
    const Series& delta_cmd = need(t, "delta_cmd_deg");

    double length = 50.0, cg = 0.6;
    if (fs::exists(dir / "scenario.json")) {
        const ScenarioConfig c = scenario_from_json(read_file((dir / "scenario.json").string()),
                                                    (dir / "scenario.json").string());
        length = c.refs.length_m;
        cg = c.vehicle.cg_frac;
    }

    const std::size_t n = time.size();
    Series torque(n), kred(n);
    PlotReport report;
    double peak_omega = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        // Engine moment about the cg with the gimbal point at the base.
        torque[i] = -thrust[i] * std::sin(delta_d[i] * kDegToRad) * (1.0 - cg) * length;
        const double speed = std::hypot(u[i], v[i]);
        kred[i] = speed > 0 ? omega[i] * length / (2.0 * speed) : 0.0;
        if (std::isfinite(kred[i]))
            report.peak_reduced_frequency = std::max(report.peak_reduced_frequency, std::abs(kred[i]));
        if (std::abs(omega[i]) > peak_omega) {
            peak_omega = std::abs(omega[i]);
            report.flip_y_over_L = y[i] / length;
            report.flip_time_s = time[i];
        }
    }

    Series thrust_kN(n);
    for (std::size_t i = 0; i < n; ++i) thrust_kN[i] = thrust[i] / 1e3;
    const std::string histories =
        time_grid(time,
                  {{"Thrust", "T [kN]", thrust_kN},
                   {"Gimbal command", "delta [deg]", delta_cmd},
                   {"Horizontal velocity", "u [m/s]", u},
                   {"Vertical velocity", "v [m/s]", v}},
                  2);

    Series mass_t(n), torque_MNm(n);
    for (std::size_t i = 0; i < n; ++i) {
        mass_t[i] = mass[i] / 1e3;
        torque_MNm[i] = torque[i] / 1e6;
    }
    const std::string parameters =
        time_grid(time,
                  {{"Engine torque", "M_T [MN m]", torque_MNm},
                   {"Mass", "m [t]", mass_t},
                   {"Pitch", "theta [deg]", theta},
                   {"Angular velocity", "omega [rad/s]", omega},
                   {"Angle of attack", "alpha [deg]", alpha},
                   {"Reduced frequency", "omega L / (2|v|)", kred}},
                  2);

    // Pose plot, equal axis scaling so the drawn body length is true to scale.
    Range xr, yr;
    xr.add(x);
    yr.add(y);
    const double half = 0.5 * length;
    xr.lo -= half, xr.hi += half, yr.lo -= half, yr.hi += half;
    const double span = std::max(xr.hi - xr.lo, yr.hi - yr.lo);
    const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
    Panel p{90, 40, 560, 560, {cx - span / 2, cx + span / 2}, {cy - span / 2, cy + span / 2}};
    Svg pose(700, 660);
    pose.panel(p, "Trajectory and attitude", "x [m]", "y [m]");
    pose.polyline(p, x, y, "#999");
    const std::size_t stride = std::max<std::size_t>(1, n / 30);
    for (std::size_t i = 0; i < n; i += stride) {
        const double th = theta[i] * kDegToRad;
        // Nose ahead of the cg by l_cg, tail behind by the rest of the length.
        const double nx = x[i] + cg * length * std::cos(th), ny = y[i] + cg * length * std::sin(th);
        const double tx = x[i] - (1 - cg) * length * std::cos(th);
        const double ty = y[i] - (1 - cg) * length * std::sin(th);
        pose.segment(p.px(tx), p.py(ty), p.px(nx), p.py(ny), "#1f5fa8", 2.0);
        pose.marker(p.px(nx), p.py(ny), "#c0392b");
    }

    const fs::path files[] = {dir / "time_histories.svg", dir / "pose.svg", dir / "flight_parameters.svg"};
    write_file(files[0].string(), histories);
    write_file(files[1].string(), pose.str());
    write_file(files[2].string(), parameters);
    for (const auto& f : files) report.files.push_back(f.string());
    return report;
}

}  // namespace flipopt
