#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "symplab/geometry.hpp"

namespace symplab {

// 2-D bucket grid over wrapped points for radius queries.
class PointGrid {
public:
    PointGrid(const Topology& topo, double cell) : topo_(topo), cell_(cell) {
        if (topo.periodic_x()) nx_ = std::max<long>(1, static_cast<long>(std::floor(topo.period_x() / cell)));
        if (topo.periodic_y()) ny_ = std::max<long>(1, static_cast<long>(std::floor(topo.period_y() / cell)));
    }

    void insert(Point p, std::size_t id) { buckets_[key(index_x(p.x), index_y(p.y))].push_back({p, id}); }

    /// Returns an id within `radius` of p, or -1.
    long find_near(Point p, double radius) const {
        const long ix = index_x(p.x);
        const long iy = index_y(p.y);
        for (long dx = -1; dx <= 1; ++dx) {
            for (long dy = -1; dy <= 1; ++dy) {
                auto it = buckets_.find(key(wrap_index(ix + dx, nx_), wrap_index(iy + dy, ny_)));
                if (it == buckets_.end()) continue;
                for (const auto& [q, id] : it->second)
                    if (topo_.distance(p, q) <= radius) return static_cast<long>(id);
            }
        }
        return -1;
    }

private:
    static long wrap_index(long i, long n) { return n > 0 ? ((i % n) + n) % n : i; }
    long index_x(double v) const { return index(v, topo_.periodic_x() ? topo_.period_x() : 0.0, nx_); }
    long index_y(double v) const { return index(v, topo_.periodic_y() ? topo_.period_y() : 0.0, ny_); }
    long index(double v, double period, long n) const {
        if (n > 0) return std::min(n - 1, static_cast<long>(std::floor(v / period * static_cast<double>(n))));
        return static_cast<long>(std::floor(v / cell_));
    }
    static std::uint64_t key(long ix, long iy) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
               static_cast<std::uint32_t>(iy);
    }

    Topology topo_;
    double cell_;
    long nx_ = 0;
    long ny_ = 0;
    std::unordered_map<std::uint64_t, std::vector<std::pair<Point, std::size_t>>> buckets_;
};

}  // namespace symplab
