#include "crashlab/geom.hpp"

namespace crashlab {

std::vector<Vec2> clip_convex(const std::vector<Vec2>& subject, const std::vector<Vec2>& clip) {
    // Clip polygon must be wound counter-clockwise for the inside test below.
    std::vector<Vec2> output = subject;
    for (size_t i = 0; i < clip.size() && !output.empty(); ++i) {
        const Vec2 a = clip[i];
        const Vec2 b = clip[(i + 1) % clip.size()];
        const Vec2 edge = b - a;
        std::vector<Vec2> input;
        input.swap(output);
        for (size_t j = 0; j < input.size(); ++j) {
            const Vec2 p = input[j];
            const Vec2 q = input[(j + 1) % input.size()];
            const double dp = cross(edge, p - a);
            const double dq = cross(edge, q - a);
            if (dp >= 0.0) output.push_back(p);
            if ((dp >= 0.0) != (dq >= 0.0)) {
                const double t = dp / (dp - dq);
                output.push_back(p + (q - p) * t);
            }
        }
    }
    return output;
}

namespace {

std::vector<Vec2> ccw_corners(const Obb& box) {
    auto c = box.corners();
    std::vector<Vec2> poly(c.begin(), c.end());
    double a = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) a += cross(poly[i], poly[(i + 1) % poly.size()]);
    if (a < 0.0) std::reverse(poly.begin(), poly.end());
    return poly;
}

}  // namespace

double obb_overlap_area(const Obb& a, const Obb& b) {
    const auto inter = clip_convex(ccw_corners(a), ccw_corners(b));
    return polygon_area(inter);
}

}  // namespace crashlab
