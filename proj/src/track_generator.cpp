#include <algorithm>
#include <random>

#include "symnav/track.hpp"

namespace symnav {

namespace {

struct Box {
    Point lo;
    Point hi;
};

Box leg_box(Point a, Point b, double pad) {
    return {{std::min(a.x, b.x) - pad, std::min(a.y, b.y) - pad},
            {std::max(a.x, b.x) + pad, std::max(a.y, b.y) + pad}};
}

bool overlaps(const Box& p, const Box& q) {
    return p.lo.x < q.hi.x && q.lo.x < p.hi.x && p.lo.y < q.hi.y && q.lo.y < p.hi.y;
}

constexpr int kMaxAttempts = 200;

}  // namespace

Track generate_random_track(std::uint64_t seed, const TrackDifficulty& diff) {
    if (diff.min_legs < 1 || diff.max_legs < diff.min_legs || !(diff.min_width > 0.0) ||
        diff.max_width < diff.min_width || diff.max_leg_length < diff.min_leg_length ||
        diff.obstacle_density < 0.0 || diff.obstacle_density > 1.0) {
        throw GenerationError(seed, "invalid difficulty parameters");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const double width = std::round(uniform(diff.min_width, diff.max_width));
        const int legs = std::uniform_int_distribution<int>(diff.min_legs, diff.max_legs)(rng);
        const double min_len = std::max(diff.min_leg_length, 2.5 * width);
        const double max_len = std::max(diff.max_leg_length, min_len);

        std::vector<Point> centerline{{0.0, 0.0}};
        Point dir{1.0, 0.0};
        bool ok = true;
        std::vector<Box> boxes;
        for (int leg = 0; leg < legs && ok; ++leg) {
            if (leg > 0) {
                const bool left = unit(rng) < 0.5;
                dir = left ? Point{-dir.y, dir.x} : Point{dir.y, -dir.x};
            }
            const double len = std::round(uniform(min_len, max_len));
            const Point next = centerline.back() + len * dir;
            // Keep a full corridor width of clearance between non-adjacent legs.
            const Box box = leg_box(centerline.back(), next, width);
            for (std::size_t k = 0; k + 1 < boxes.size(); ++k) {
                if (overlaps(box, boxes[k])) {
                    ok = false;
                    break;
                }
            }
            boxes.push_back(box);
            centerline.push_back(next);
        }
        if (!ok) {
            continue;
        }

        std::vector<Obstacle> obstacles;
        for (std::size_t leg = 1; leg + 1 < centerline.size(); ++leg) {
            if (unit(rng) >= diff.obstacle_density) {
                continue;
            }
            const Point a = centerline[leg];
            const Point b = centerline[leg + 1];
            const Point d = b - a;
            const double len = std::hypot(d.x, d.y);
            const Point u{d.x / len, d.y / len};
            const Point n{-u.y, u.x};
            const double along = std::round(uniform(0.4, 0.6) * len);
            const double depth = std::round(uniform(0.2, 0.35) * width);
            const double extent = std::round(uniform(20.0, 40.0));
            const double side = unit(rng) < 0.5 ? 1.0 : -1.0;
            // Flush against one wall, protruding `depth` into the corridor.
            const Point center = a + along * u + (side * (width / 2.0 - depth / 2.0)) * n;
            const bool horizontal = std::abs(u.x) > 0.5;
            obstacles.push_back({center, horizontal ? extent : depth, horizontal ? depth : extent});
        }

        const double back = width / 2.0;
        const double ahead = 0.75 * width;
        std::vector<Segment> walls = corridor_walls(centerline, width, back, ahead);
        try {
            return Track("random_" + std::to_string(seed), width, centerline.front(), 0.0,
                         centerline.back(), std::move(walls), std::move(obstacles));
        } catch (const ValidationError&) {
            continue;
        }
    }
    throw GenerationError(seed, "no valid layout after " + std::to_string(kMaxAttempts) +
                                    " attempts");
}

}  // namespace symnav
