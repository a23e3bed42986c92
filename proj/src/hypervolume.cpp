#include <algorithm>
#include <map>

#include "dgcc/pareto.hpp"

namespace dgcc {

namespace {

template <std::size_t N>
std::vector<std::array<double, N>> inside_box(std::span<const std::array<double, N>> points,
                                              const std::array<double, N>& ref, std::size_t* clipped) {
    std::vector<std::array<double, N>> kept;
    kept.reserve(points.size());
    std::size_t outside = 0;
    for (const auto& p : points) {
        bool out = false;
        bool degenerate = false;
        for (std::size_t j = 0; j < N; ++j) {
            if (!(p[j] <= ref[j])) out = true;
            else if (p[j] == ref[j]) degenerate = true;
        }
        if (out) {
            ++outside;
        } else if (!degenerate) {
            kept.push_back(p);
        }
    }
    if (clipped) *clipped = outside;
    return kept;
}

} // namespace

double hypervolume_2d(std::span<const std::array<double, 2>> points, std::array<double, 2> ref, std::size_t* clipped) {
    auto pts = inside_box<2>(points, ref, clipped);
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double floor_y = ref[1];
    for (const auto& p : pts) {
        if (p[1] < floor_y) {
            area += (ref[0] - p[0]) * (floor_y - p[1]);
            floor_y = p[1];
        }
    }
    return area;
}

// Sweep along the third objective, keeping the 2D staircase of the points
// seen so far (x ascending, y descending) and its dominated area.
double hypervolume_3d(std::span<const std::array<double, 3>> points, std::array<double, 3> ref, std::size_t* clipped) {
    auto pts = inside_box<3>(points, ref, clipped);
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        if (a[2] != b[2]) return a[2] < b[2];
        if (a[0] != b[0]) return a[0] < b[0];
        return a[1] < b[1];
    });

    std::map<double, double> stairs;
    double area = 0.0;
    double volume = 0.0;
    double z_last = 0.0;
    const double rx = ref[0];
    const double ry = ref[1];
    for (const auto& p : pts) {
        // Close the slab below this point before the staircase changes.
        volume += area * (p[2] - z_last);
        z_last = p[2];
        const double x = p[0];
        const double y = p[1];
        auto it = stairs.lower_bound(x);
        if (it != stairs.end() && it->first == x && it->second <= y) continue;
        if (it != stairs.begin() && std::prev(it)->second <= y) continue;

        double covered = 0.0;
        double cx = x;
        double cy = it != stairs.begin() ? std::prev(it)->second : ry;
        while (it != stairs.end() && it->second >= y) {
            covered += (it->first - cx) * (ry - cy);
            cx = it->first;
            cy = it->second;
            it = stairs.erase(it);
        }
        const double x_next = it != stairs.end() ? it->first : rx;
        covered += (x_next - cx) * (ry - cy);

        area += (x_next - x) * (ry - y) - covered;
        stairs.emplace(x, y);
    }
    volume += area * (ref[2] - z_last);
    return volume;
}

double hypervolume(std::span<const ObjectiveVector> points, const ReferencePoint& ref, std::size_t* clipped) {
    std::vector<std::array<double, 3>> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.push_back(p.to_array());
    return hypervolume_3d(pts, ref.coords, clipped);
}

} // namespace dgcc
