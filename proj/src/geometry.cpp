#include "gwk/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "gwk/error.hpp"
#include "gwk/random.hpp"

namespace gwk {

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
    for (double c : coords_)
        if (!std::isfinite(c)) throw InvalidArgument("point coordinate is not finite");
}

double distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw InvalidArgument("distance: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

double distance(const Point& a, const Point& b) { return distance(a.coords(), b.coords()); }

LocationSet::LocationSet(std::vector<double> coords, int dim) : coords_(std::move(coords)), dim_(dim) {
    if (dim < 1 || dim > 3) throw InvalidArgument("location dimension must be 1, 2 or 3");
    if (coords_.size() % static_cast<std::size_t>(dim) != 0)
        throw InvalidArgument("coordinate count is not a multiple of the dimension");
    for (double c : coords_)
        if (!std::isfinite(c)) throw InvalidArgument("location coordinate is not finite");
}

LocationSet::LocationSet(const std::vector<Point>& points) {
    if (points.empty()) return;
    dim_ = points.front().dim();
    if (dim_ < 1 || dim_ > 3) throw InvalidArgument("location dimension must be 1, 2 or 3");
    coords_.reserve(points.size() * dim_);
    for (const auto& p : points) {
        if (p.dim() != dim_) throw InvalidArgument("points of mixed dimension");
        coords_.insert(coords_.end(), p.coords().begin(), p.coords().end());
    }
}

Point LocationSet::point(std::size_t i) const {
    auto c = (*this)[i];
    return Point(std::vector<double>(c.begin(), c.end()));
}

double LocationSet::distance(std::size_t i, std::size_t j) const noexcept {
    const double* a = coords_.data() + i * dim_;
    const double* b = coords_.data() + j * dim_;
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

double LocationSet::bounding_diameter() const noexcept {
    if (size() == 0) return 0.0;
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i = 0; i < size(); ++i) {
            lo = std::min(lo, coords_[i * dim_ + k]);
            hi = std::max(hi, coords_[i * dim_ + k]);
        }
        s += (hi - lo) * (hi - lo);
    }
    return std::sqrt(s);
}

bool LocationSet::all_distinct() const {
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), 0);
    auto row = [&](std::size_t i) { return (*this)[i]; };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        auto ra = row(a), rb = row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    });
    for (std::size_t k = 1; k < order.size(); ++k) {
        auto ra = row(order[k - 1]), rb = row(order[k]);
        if (std::equal(ra.begin(), ra.end(), rb.begin())) return false;
    }
    return true;
}

std::vector<double> grid_axis(double increment) {
    if (!(increment > 0.0) || !std::isfinite(increment))
        throw InvalidArgument("grid increment must be positive");
    std::vector<double> axis;
    for (std::size_t k = 0;; ++k) {
        const double v = static_cast<double>(k) * increment;
        if (v > 1.0 + 1e-12) break;
        axis.push_back(v);
    }
    return axis;
}

LocationSet perturbed_grid(double increment, double jitter, std::uint64_t seed) {
    if (!(jitter >= 0.0) || !std::isfinite(jitter)) throw InvalidArgument("grid jitter must be >= 0");
    const auto axis = grid_axis(increment);
    RandomStream rs(seed, stream_id(0x67726964 /* "grid" */));
    std::vector<double> coords;
    coords.reserve(axis.size() * axis.size() * 2);
    // y varies slowest so rows of the CSV sweep x first.
    for (double y : axis) {
        for (double x : axis) {
            const double dx = jitter > 0.0 ? rs.uniform(-jitter, jitter) : 0.0;
            const double dy = jitter > 0.0 ? rs.uniform(-jitter, jitter) : 0.0;
            coords.push_back(x + dx);
            coords.push_back(y + dy);
        }
    }
    return LocationSet(std::move(coords), 2);
}

LocationSet subsample(const LocationSet& set, std::size_t m, std::uint64_t seed) {
    const std::size_t n = set.size();
    if (m > n)
        throw InvalidArgument("subsample size " + std::to_string(m) + " exceeds set size " + std::to_string(n));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    RandomStream rs(seed, stream_id(0x73756273 /* "subs" */));
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t j = k + static_cast<std::size_t>(rs.below(n - k));
        std::swap(idx[k], idx[j]);
    }
    std::vector<double> coords;
    coords.reserve(m * set.dim());
    for (std::size_t k = 0; k < m; ++k) {
        auto p = set[idx[k]];
        coords.insert(coords.end(), p.begin(), p.end());
    }
    return LocationSet(std::move(coords), set.dim());
}

RadiusIndex::RadiusIndex(const LocationSet& set, double radius) : set_(&set), radius_(radius) {
    if (!(radius >= 0.0)) throw InvalidArgument("radius must be >= 0");
    const int d = set.dim();
    origin_.assign(d, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < set.size(); ++i)
        for (int k = 0; k < d; ++k) origin_[k] = std::min(origin_[k], set[i][k]);
    if (radius_ == 0.0) return;
    std::array<std::int64_t, 3> cell{};
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (int k = 0; k < d; ++k)
            cell[k] = static_cast<std::int64_t>(std::floor((set[i][k] - origin_[k]) / radius_));
        cells_[cell_key(std::span(cell.data(), d))].push_back(i);
    }
}

std::int64_t RadiusIndex::cell_key(std::span<const std::int64_t> cell) const noexcept {
    // Collisions only merge buckets; query() filters by exact distance.
    std::int64_t key = 0;
    for (auto c : cell) key = key * 2097143 + c;
    return key;
}

std::vector<std::size_t> RadiusIndex::query(std::span<const double> center) const {
    std::vector<std::size_t> out;
    const int d = set_->dim();
    if (static_cast<int>(center.size()) != d) throw InvalidArgument("query dimension mismatch");
    if (radius_ == 0.0 || set_->size() == 0) return out;
    std::array<std::int64_t, 3> base{}, cell{};
    for (int k = 0; k < d; ++k) {
        const double c = std::floor((center[k] - origin_[k]) / radius_);
        // Far outside the indexed box: clamp keeps the loop finite; distances still decide.
        base[k] = static_cast<std::int64_t>(std::clamp(c, -4.0e15, 4.0e15));
    }
    const int span = 3;
    int total = 1;
    for (int k = 0; k < d; ++k) total *= span;
    for (int t = 0; t < total; ++t) {
        int rem = t;
        for (int k = 0; k < d; ++k) {
            cell[k] = base[k] + (rem % span) - 1;
            rem /= span;
        }
        auto it = cells_.find(cell_key(std::span(cell.data(), d)));
        if (it == cells_.end()) continue;
        for (std::size_t i : it->second)
            if (gwk::distance(center, (*set_)[i]) < radius_) out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::size_t> neighbors_within(const LocationSet& set, const Point& center, double radius) {
    return RadiusIndex(set, radius).query(center.coords());
}

void write_locations_csv(const LocationSet& set, std::ostream& out) {
    static const char* names[] = {"x", "y", "z"};
    for (int k = 0; k < set.dim(); ++k) out << (k ? "," : "") << names[k];
    out << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (int k = 0; k < set.dim(); ++k) out << (k ? "," : "") << set[i][k];
        out << '\n';
    }
}

void write_locations_csv(const LocationSet& set, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    write_locations_csv(set, f);
    if (!f) throw IoError("write failed: " + path);
}

LocationSet read_locations_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("locations CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    int dim = 0;
    if (line == "x") dim = 1;
    else if (line == "x,y") dim = 2;
    else if (line == "x,y,z") dim = 3;
    else throw InvalidArgument("locations CSV header must be x, x,y or x,y,z; got '" + line + "'");
    std::vector<double> coords;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        int count = 0;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                coords.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                throw InvalidArgument("locations CSV row " + std::to_string(row) + ": bad number '" + cell + "'");
            }
            ++count;
        }
        if (count != dim)
            throw InvalidArgument("locations CSV row " + std::to_string(row) + ": expected " +
                                  std::to_string(dim) + " columns");
    }
    return LocationSet(std::move(coords), dim);
}

LocationSet read_locations_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    return read_locations_csv(f);
}

}  // namespace gwk
