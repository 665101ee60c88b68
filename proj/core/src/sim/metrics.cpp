#include "smforge/sim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace smforge::sim {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

    std::size_t largest() const { return parent_.empty() ? 0 : *std::max_element(size_.begin(), size_.end()); }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

}  // namespace

double clusterFraction(const World& world, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("cluster threshold must be positive");
    const auto n = world.robots.size();
    if (n == 0) return 0.0;
    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& a = world.robots[i].pose;
            const auto& b = world.robots[j].pose;
            if (std::hypot(a.x - b.x, a.y - b.y) <= threshold) sets.unite(i, j);
        }
    return static_cast<double>(sets.largest()) / static_cast<double>(n);
}

TaxisMetrics taxisMetrics(const World& world) {
    if (!world.beacon) throw std::invalid_argument("no beacon configured");
    if (world.robots.empty()) throw std::invalid_argument("no robots");
    double cx = 0.0;
    double cy = 0.0;
    for (const auto& r : world.robots) {
        cx += r.pose.x;
        cy += r.pose.y;
    }
    cx /= static_cast<double>(world.robots.size());
    cy /= static_cast<double>(world.robots.size());
    TaxisMetrics m;
    m.centroidBeaconDistance = std::hypot(cx - world.beacon->x, cy - world.beacon->y);
    for (const auto& r : world.robots) m.maxSpread = std::max(m.maxSpread, std::hypot(r.pose.x - cx, r.pose.y - cy));
    return m;
}

}  // namespace smforge::sim
