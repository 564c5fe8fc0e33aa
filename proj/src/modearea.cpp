#include "rsq/modearea.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rsq/constants.hpp"
#include "rsq/errors.hpp"

namespace rsq {

using cd = std::complex<double>;

namespace {

// Trapezoidal weights for a strictly increasing axis.
std::vector<double> trapezoid_weights(const std::vector<double>& axis) {
    const size_t n = axis.size();
    std::vector<double> w(n, 0.0);
    for (size_t i = 0; i + 1 < n; ++i) {
        const double half = 0.5 * (axis[i + 1] - axis[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    return w;
}

void validate_axis(const std::vector<double>& axis, const char* name) {
    if (axis.size() < 2)
        throw ConfigError(std::string("mode profile: ") + name +
                          " axis needs at least two points");
    for (size_t i = 0; i + 1 < axis.size(); ++i)
        if (!(axis[i] < axis[i + 1]))
            throw ConfigError(std::string("mode profile: ") + name +
                              " axis is not strictly increasing");
}

} // namespace

ModeProfile load_mode_profile(const std::string& path, double n_bar, double chi3_bar,
                              double v_ring) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mode profile '" + path + "'");

    struct Row {
        double y, z, n, chi3, ng;
        cd e[3];
        bool has_ng;
    };
    std::vector<Row> rows;
    int ncols = 0;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        std::vector<double> f;
        double v;
        while (ss >> v) f.push_back(v);
        std::string trailing;
        if (!ss.eof() && ss.fail() && (ss.clear(), ss >> trailing))
            throw ConfigError("mode profile '" + path + "' line " +
                              std::to_string(line_no) + ": non-numeric token '" +
                              trailing + "'");
        if (f.size() != 10 && f.size() != 11)
            throw ConfigError("mode profile '" + path + "' line " +
                              std::to_string(line_no) + ": expected 10 or 11 columns, got " +
                              std::to_string(f.size()));
        if (ncols == 0) ncols = static_cast<int>(f.size());
        if (static_cast<int>(f.size()) != ncols)
            throw ConfigError("mode profile '" + path + "' line " +
                              std::to_string(line_no) + ": inconsistent column count");
        for (double x : f)
            if (!std::isfinite(x))
                throw ConfigError("mode profile '" + path + "' line " +
                                  std::to_string(line_no) + ": non-finite value");
        Row r;
        r.y = f[0];
        r.z = f[1];
        r.e[0] = cd(f[2], f[3]);
        r.e[1] = cd(f[4], f[5]);
        r.e[2] = cd(f[6], f[7]);
        r.n = f[8];
        r.chi3 = f[9];
        r.has_ng = f.size() == 11;
        r.ng = r.has_ng ? f[10] : 0.0;
        rows.push_back(r);
    }
    if (rows.empty()) throw ConfigError("mode profile '" + path + "' has no data rows");

    // Reconstruct the rectangular grid from the node coordinates.
    std::map<double, size_t> ys, zs;
    for (const Row& r : rows) {
        ys.emplace(r.y, 0);
        zs.emplace(r.z, 0);
    }
    ModeProfile p;
    for (auto& [v2, idx] : ys) {
        idx = p.y.size();
        p.y.push_back(v2);
    }
    for (auto& [v2, idx] : zs) {
        idx = p.z.size();
        p.z.push_back(v2);
    }
    const size_t ny = p.y.size(), nz = p.z.size();
    if (rows.size() != ny * nz)
        throw ConfigError("mode profile '" + path + "': " + std::to_string(rows.size()) +
                          " rows do not tile the " + std::to_string(ny) + " x " +
                          std::to_string(nz) + " grid of distinct coordinates");
    const bool has_ng = rows.front().has_ng;
    p.e.assign(ny * nz, {cd(0, 0), cd(0, 0), cd(0, 0)});
    p.index.assign(ny * nz, 0.0);
    p.chi3_mask.assign(ny * nz, 0.0);
    if (has_ng) p.group_index.assign(ny * nz, 0.0);
    std::vector<bool> seen(ny * nz, false);
    for (const Row& r : rows) {
        const size_t k = ys[r.y] * nz + zs[r.z];
        if (seen[k])
            throw ConfigError("mode profile '" + path + "': duplicate node (y, z) = (" +
                              std::to_string(r.y) + ", " + std::to_string(r.z) + ")");
        seen[k] = true;
        p.e[k] = {r.e[0], r.e[1], r.e[2]};
        p.index[k] = r.n;
        if (r.chi3 < 0.0 || r.chi3 > 1.0)
            throw ConfigError("mode profile '" + path + "': chi3 mask " +
                              std::to_string(r.chi3) + " outside [0, 1]");
        p.chi3_mask[k] = r.chi3;
        if (has_ng) p.group_index[k] = r.ng;
    }
    p.n_bar = n_bar;
    p.chi3_bar = chi3_bar;
    p.v_ring = v_ring;
    return p;
}

double effective_area(const ModeProfile& profile, Polarization pol) {
    validate_axis(profile.y, "y");
    validate_axis(profile.z, "z");
    const size_t ny = profile.y.size(), nz = profile.z.size(), nodes = ny * nz;
    if (profile.e.size() != nodes || profile.index.size() != nodes ||
        profile.chi3_mask.size() != nodes)
        throw ConfigError("mode profile: field/index/mask arrays do not match the grid");
    const bool weighted = !profile.group_index.empty();
    if (weighted && profile.group_index.size() != nodes)
        throw ConfigError("mode profile: group-index array does not match the grid");
    if (weighted && !(profile.v_ring > 0.0))
        throw ConfigError("mode profile: group-index weight needs v_ring > 0");
    if (weighted && !(profile.n_bar > 0.0))
        throw ConfigError("mode profile: group-index weight needs n_bar > 0");

    const std::vector<double> wy = trapezoid_weights(profile.y);
    const std::vector<double> wz = trapezoid_weights(profile.z);

    double num = 0.0, den = 0.0;
    for (size_t iy = 0; iy < ny; ++iy) {
        for (size_t iz = 0; iz < nz; ++iz) {
            const size_t k = iy * nz + iz;
            const double wq = wy[iy] * wz[iz];
            const auto& e = profile.e[k];
            double quartic, pair;
            if (pol == Polarization::full_vector) {
                const double e2 =
                    std::norm(e[0]) + std::norm(e[1]) + std::norm(e[2]);
                const cd dot = e[0] * e[0] + e[1] * e[1] + e[2] * e[2];
                quartic = (std::norm(dot) + 2.0 * e2 * e2) / 3.0;
                double w = 1.0;
                if (weighted)
                    w = (profile.index[k] / profile.n_bar) *
                        (profile.v_ring * profile.group_index[k] / constants::c0);
                pair = e2 * w;
            } else {
                const double e2 = std::norm(e[pol == Polarization::te ? 0 : 2]);
                quartic = e2 * e2;
                pair = e2;
            }
            num += wq * profile.chi3_mask[k] * quartic;
            den += wq * pair;
        }
    }
    if (!(den > 0.0)) throw PhysicsError("effective_area: the mode field is zero");
    if (!(num > 0.0))
        throw PhysicsError(
            "effective_area: the mode field vanishes on the nonlinear region");
    return den * den / num;
}

double nonlinear_index(double n_bar, double chi3_bar) {
    if (!(n_bar > 0.0)) throw ConfigError("nonlinear_index: n_bar must be positive");
    return 3.0 * chi3_bar / (4.0 * n_bar * n_bar * constants::eps0 * constants::c0);
}

double waveguide_gamma(double area, double omega, double n_bar, double chi3_bar) {
    if (!(area > 0.0)) throw ConfigError("waveguide_gamma: area must be positive");
    if (!(omega > 0.0)) throw ConfigError("waveguide_gamma: omega must be positive");
    return omega * nonlinear_index(n_bar, chi3_bar) / (constants::c0 * area);
}

double lambda_coefficient(double gamma, double omega, double v, double circumference) {
    if (!(omega > 0.0) || !(v > 0.0) || !(circumference > 0.0))
        throw ConfigError("lambda_coefficient: omega, v, circumference must be positive");
    return constants::hbar * omega * v * v * gamma / circumference;
}

} // namespace rsq
