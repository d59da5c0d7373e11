#pragma once

// SVG 1.1 drawing of a two-dimensional parliament. Coordinates are scaled by
// the common denominator of everything drawn so all pixel values are integers.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "toricstab/exactla.hpp"
#include "toricstab/parliament.hpp"

namespace toricstab {

struct SvgSegment {
    IntVector from;
    IntVector to;
};

struct SvgOptions {
    int unit = 48; // pixels per lattice unit before denominator scaling
    std::vector<SvgSegment> segments;
};

namespace detail {

inline const char* const kFills[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#9c755f"};
inline const char* const kShapes[] = {"circle", "square", "diamond", "triangle", "triangle-down", "cross"};

/// Vertices of a convex polygon in counter-clockwise order, exactly.
inline std::vector<RatVector> convex_order(std::vector<RatVector> vs) {
    if (vs.size() < 3) return vs;
    RatVector c{0, 0};
    for (const auto& v : vs) c[0] += v[0], c[1] += v[1];
    c[0] /= static_cast<long>(vs.size());
    c[1] /= static_cast<long>(vs.size());
    auto half = [&](const RatVector& v) {
        const Rational x = v[0] - c[0], y = v[1] - c[1];
        return (y > 0 || (y == 0 && x > 0)) ? 0 : 1;
    };
    std::sort(vs.begin(), vs.end(), [&](const RatVector& a, const RatVector& b) {
        const int ha = half(a), hb = half(b);
        if (ha != hb) return ha < hb;
        const Rational cross = (a[0] - c[0]) * (b[1] - c[1]) - (a[1] - c[1]) * (b[0] - c[0]);
        return cross > 0;
    });
    return vs;
}

inline Integer floor_of(const Rational& q) {
    Integer z;
    mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return z;
}

inline Integer ceil_of(const Rational& q) {
    Integer z;
    mpz_cdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return z;
}

inline std::string vec_label(const RatVector& v) {
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + to_string(v[k]);
    return s + ")";
}

} // namespace detail

inline std::string render_svg(const Parliament& p, const SvgOptions& opt = {}) {
    if (p.fan.dim != 2) throw InputError("render_svg: only two-dimensional parliaments can be drawn");
    std::vector<RatVector> pts;
    for (const auto& poly : p.polytopes)
        for (const auto& v : poly.vertices()) pts.push_back(v);
    for (const auto& ca : p.annotations)
        for (const auto& a : ca.entries) pts.push_back(to_rational(a.character));
    for (const auto& s : opt.segments) {
        pts.push_back(to_rational(s.from));
        pts.push_back(to_rational(s.to));
    }
    pts.push_back({0, 0});
    Integer den = 1;
    for (const auto& q : pts)
        for (const auto& x : q) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    IntVector lo(2), hi(2);
    for (int k = 0; k < 2; ++k) {
        Rational mn = pts[0][k], mx = pts[0][k];
        for (const auto& q : pts) mn = std::min(mn, q[k]), mx = std::max(mx, q[k]);
        lo[k] = detail::floor_of(mn) - 1;
        hi[k] = detail::ceil_of(mx) + 1;
    }
    const Integer scale = den * opt.unit; // pixels per lattice unit
    const Integer width = (hi[0] - lo[0]) * scale, height = (hi[1] - lo[1]) * scale;
    const Integer legend = 24 * static_cast<long>(p.annotations.size() + 1);
    // y grows downward in SVG.
    auto px = [&](const Rational& x) { return detail::floor_of((x - lo[0]) * scale); };
    auto py = [&](const Rational& y) { return detail::floor_of((hi[1] - y) * scale); };
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height + legend
      << "\" viewBox=\"0 0 " << width << " " << height + legend << "\">\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height + legend << "\" fill=\"white\"/>\n";
    o << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (Integer x = lo[0]; x <= hi[0]; ++x)
        o << "<line x1=\"" << px(x) << "\" y1=\"0\" x2=\"" << px(x) << "\" y2=\"" << height << "\"/>\n";
    for (Integer y = lo[1]; y <= hi[1]; ++y)
        o << "<line x1=\"0\" y1=\"" << py(y) << "\" x2=\"" << width << "\" y2=\"" << py(y) << "\"/>\n";
    o << "</g>\n";
    o << "<circle cx=\"" << px(0) << "\" cy=\"" << py(0) << "\" r=\"2\" fill=\"black\"/>\n";

    int empty_row = 0;
    for (std::size_t e = 0; e < p.polytopes.size(); ++e) {
        const char* fill = detail::kFills[e % std::size(detail::kFills)];
        const std::string label = "P" + detail::vec_label(p.ground_set.vectors[e]);
        const auto vs = detail::convex_order(p.polytopes[e].vertices());
        if (vs.empty()) {
            o << "<text x=\"4\" y=\"" << 14 + 14 * empty_row++ << "\" font-size=\"12\" fill=\"" << fill << "\">" << label
              << " empty</text>\n";
            continue;
        }
        if (vs.size() == 1) {
            o << "<circle cx=\"" << px(vs[0][0]) << "\" cy=\"" << py(vs[0][1]) << "\" r=\"4\" fill=\"" << fill << "\"/>\n";
        } else {
            o << "<polygon points=\"";
            for (std::size_t k = 0; k < vs.size(); ++k) o << (k ? " " : "") << px(vs[k][0]) << "," << py(vs[k][1]);
            o << "\" fill=\"" << fill << "\" fill-opacity=\"0.35\" stroke=\"" << fill << "\" stroke-width=\"2\"/>\n";
        }
        Rational cx = 0, cy = 0;
        for (const auto& v : vs) cx += v[0], cy += v[1];
        cx /= static_cast<long>(vs.size());
        cy /= static_cast<long>(vs.size());
        o << "<text x=\"" << px(cx) << "\" y=\"" << py(cy) << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"" << fill << "\">"
          << label << "</text>\n";
    }

    for (const auto& s : opt.segments)
        o << "<line x1=\"" << px(s.from[0]) << "\" y1=\"" << py(s.from[1]) << "\" x2=\"" << px(s.to[0]) << "\" y2=\"" << py(s.to[1])
          << "\" stroke=\"#d62728\" stroke-width=\"3\"/>\n";

    auto marker = [&](std::size_t shape, const Integer& x, const Integer& y) {
        const int r = 5;
        switch (shape % std::size(detail::kShapes)) {
        case 0:
            o << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << r << "\"/>\n";
            break;
        case 1:
            o << "<rect x=\"" << x - r << "\" y=\"" << y - r << "\" width=\"" << 2 * r << "\" height=\"" << 2 * r << "\"/>\n";
            break;
        case 2:
            o << "<polygon points=\"" << x << "," << y - r << " " << x + r << "," << y << " " << x << "," << y + r << " " << x - r << "," << y
              << "\"/>\n";
            break;
        case 3:
            o << "<polygon points=\"" << x << "," << y - r << " " << x + r << "," << y + r << " " << x - r << "," << y + r << "\"/>\n";
            break;
        case 4:
            o << "<polygon points=\"" << x << "," << y + r << " " << x + r << "," << y - r << " " << x - r << "," << y - r << "\"/>\n";
            break;
        default:
            o << "<path d=\"M" << x - r << " " << y - r << " L" << x + r << " " << y + r << " M" << x - r << " " << y + r << " L" << x + r
              << " " << y - r << "\" stroke-width=\"2\"/>\n";
        }
    };
    o << "<g fill=\"none\" stroke=\"black\" stroke-width=\"1.5\">\n";
    for (const auto& ca : p.annotations)
        for (const auto& a : ca.entries) marker(ca.cone, px(a.character[0]), py(a.character[1]));
    o << "</g>\n";

    o << "<g fill=\"none\" stroke=\"black\" stroke-width=\"1.5\">\n";
    for (std::size_t k = 0; k < p.annotations.size(); ++k) marker(p.annotations[k].cone, 12, height + 12 + 24 * static_cast<long>(k));
    o << "</g>\n";
    for (std::size_t k = 0; k < p.annotations.size(); ++k) {
        const auto& rays = p.fan.max_cones[p.annotations[k].cone];
        o << "<text x=\"26\" y=\"" << height + 16 + 24 * static_cast<long>(k) << "\" font-size=\"12\">cone " << p.annotations[k].cone
          << " (rays";
        for (auto i : rays) o << " " << i;
        o << ")</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

} // namespace toricstab
