#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace gwk {

/// A location in R^d, d in {1, 2, 3}.
class Point {
public:
    Point() = default;
    explicit Point(std::vector<double> coords);
    Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

    int dim() const noexcept { return static_cast<int>(coords_.size()); }
    double operator[](std::size_t i) const noexcept { return coords_[i]; }
    std::span<const double> coords() const noexcept { return coords_; }

    friend bool operator==(const Point&, const Point&) = default;

private:
    std::vector<double> coords_;
};

/// Euclidean distance. Throws InvalidArgument on dimension mismatch.
double distance(const Point& a, const Point& b);
double distance(std::span<const double> a, std::span<const double> b);

/// Immutable ordered set of points sharing one dimension, stored contiguously.
class LocationSet {
public:
    LocationSet() = default;
    /// `coords` is row-major, n * dim values.
    LocationSet(std::vector<double> coords, int dim);
    explicit LocationSet(const std::vector<Point>& points);

    std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    int dim() const noexcept { return dim_; }
    std::span<const double> operator[](std::size_t i) const noexcept {
        return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    Point point(std::size_t i) const;
    std::span<const double> raw() const noexcept { return coords_; }

    double distance(std::size_t i, std::size_t j) const noexcept;
    /// Largest pairwise distance bound: the diagonal of the bounding box.
    double bounding_diameter() const noexcept;
    /// True when no two points coincide.
    bool all_distinct() const;

    friend bool operator==(const LocationSet&, const LocationSet&) = default;

private:
    std::vector<double> coords_;
    int dim_ = 0;
};

/// Regular grid {0, inc, 2 inc, ...} ∩ [0,1] on each axis of the unit square,
/// every coordinate then shifted by an independent uniform draw on [-jitter, jitter].
LocationSet perturbed_grid(double increment, double jitter, std::uint64_t seed);

/// The unperturbed axis values used by perturbed_grid.
std::vector<double> grid_axis(double increment);

/// m points drawn uniformly without replacement (partial Fisher-Yates).
LocationSet subsample(const LocationSet& set, std::size_t m, std::uint64_t seed);

/// Uniform-grid binning with cell size equal to the query radius.
class RadiusIndex {
public:
    RadiusIndex(const LocationSet& set, double radius);

    /// Indices i with distance(center, s_i) < radius, ascending.
    std::vector<std::size_t> query(std::span<const double> center) const;
    double radius() const noexcept { return radius_; }

private:
    std::int64_t cell_key(std::span<const std::int64_t> cell) const noexcept;

    const LocationSet* set_;
    double radius_;
    std::vector<double> origin_;
    std::unordered_map<std::int64_t, std::vector<std::size_t>> cells_;
};

/// Indices of points strictly closer than `radius` to `center`, ascending.
std::vector<std::size_t> neighbors_within(const LocationSet& set, const Point& center, double radius);

/// CSV with header `x,y[,z]`, 17 significant digits.
void write_locations_csv(const LocationSet& set, std::ostream& out);
void write_locations_csv(const LocationSet& set, const std::string& path);
LocationSet read_locations_csv(std::istream& in);
LocationSet read_locations_csv(const std::string& path);

}  // namespace gwk
