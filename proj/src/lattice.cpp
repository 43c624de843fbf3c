#include "nctorus/lattice.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "nctorus/error.hpp"

namespace nct {

namespace detail {

struct PhaseCache {
  std::mutex mutex;
  int range = -1;
  std::shared_ptr<const std::vector<std::vector<Complex>>> tables;
};

}  // namespace detail

namespace {

int pair_count(int n) { return n * (n - 1) / 2; }

std::vector<Complex> build_phase_table(double theta, int range) {
  // Entry m + range holds exp(i pi theta m); negative m are set to the exact conjugate so that
  // compressions of selfadjoint elements come out exactly Hermitian.
  std::vector<Complex> t(static_cast<std::size_t>(2 * range + 1));
  t[static_cast<std::size_t>(range)] = Complex(1.0, 0.0);
  for (int m = 1; m <= range; ++m) {
    double a = std::numbers::pi * theta * m;
    Complex z(std::cos(a), std::sin(a));
    t[static_cast<std::size_t>(range + m)] = z;
    t[static_cast<std::size_t>(range - m)] = std::conj(z);
  }
  return t;
}

}  // namespace

TorusGeometry::TorusGeometry(int n, std::vector<double> theta_in)
    : n_(n), theta_(std::move(theta_in)), cache_(std::make_shared<detail::PhaseCache>()) {
  if (n < 2 || n > kMaxDimension) {
    throw Error("torus dimension must lie in [2, " + std::to_string(kMaxDimension) + "], got " +
                std::to_string(n));
  }
  if (theta_.size() != static_cast<std::size_t>(n * n)) {
    throw Error("theta must have n*n entries");
  }
  for (int j = 0; j < n; ++j) {
    if (theta(j, j) != 0.0) throw Error("theta must have zero diagonal");
    for (int k = j + 1; k < n; ++k) {
      if (theta(j, k) != -theta(k, j)) throw Error("theta must be antisymmetric");
      if (!std::isfinite(theta(j, k))) throw Error("theta entries must be finite");
    }
  }
}

TorusGeometry TorusGeometry::plane(double t) { return TorusGeometry(2, {0.0, t, -t, 0.0}); }

TorusGeometry TorusGeometry::commutative(int n) {
  return TorusGeometry(n, std::vector<double>(static_cast<std::size_t>(n * n), 0.0));
}

bool TorusGeometry::is_commutative() const noexcept {
  for (double t : theta_) {
    if (t != 0.0) return false;
  }
  return true;
}

std::uint64_t TorusGeometry::digest() const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  std::int32_t n = n_;
  mix(&n, sizeof n);
  for (double t : theta_) {
    double v = t == 0.0 ? 0.0 : t;  // fold -0.0
    mix(&v, sizeof v);
  }
  return h;
}

Complex TorusGeometry::cocycle(std::span<const int> p, std::span<const int> q) const {
  if (p.size() != static_cast<std::size_t>(n_) || q.size() != p.size()) {
    throw GeometryMismatch("cocycle arguments must have length n");
  }
  double s = 0.0;
  for (int j = 0; j < n_; ++j) {
    for (int l = j + 1; l < n_; ++l) {
      long long m = static_cast<long long>(q[j]) * p[l] - static_cast<long long>(q[l]) * p[j];
      s += theta(j, l) * static_cast<double>(m);
    }
  }
  double a = std::numbers::pi * s;
  return {std::cos(a), std::sin(a)};
}

std::shared_ptr<const std::vector<std::vector<Complex>>> TorusGeometry::phase_tables(int range) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (cache_->range >= range && cache_->tables) return cache_->tables;
  int r = std::max(range, 2 * cache_->range);
  auto tables = std::make_shared<std::vector<std::vector<Complex>>>();
  tables->reserve(static_cast<std::size_t>(pair_count(n_)));
  for (int j = 0; j < n_; ++j) {
    for (int l = j + 1; l < n_; ++l) tables->push_back(build_phase_table(theta(j, l), r));
  }
  cache_->range = r;
  cache_->tables = std::move(tables);
  return cache_->tables;
}

CocycleEvaluator::CocycleEvaluator(const TorusGeometry& geometry, int range)
    : n_(geometry.dim()), range_(range), tables_(geometry.phase_tables(range)) {
  // The cache may hold larger tables; index relative to their actual centre.
  range_ = static_cast<int>(((*tables_)[0].size() - 1) / 2);
}

Complex CocycleEvaluator::operator()(const int* p, const int* q) const noexcept {
  Complex z(1.0, 0.0);
  int pair = 0;
  for (int j = 0; j < n_; ++j) {
    for (int l = j + 1; l < n_; ++l, ++pair) {
      int m = q[j] * p[l] - q[l] * p[j];
      if (m != 0) z *= (*tables_)[static_cast<std::size_t>(pair)][static_cast<std::size_t>(m + range_)];
    }
  }
  return z;
}

namespace {

std::shared_ptr<const std::vector<int>> coordinate_table(int n, int radius) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const std::vector<int>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(n, radius);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::size_t side = static_cast<std::size_t>(2 * radius + 1);
  std::size_t size = 1;
  for (int i = 0; i < n; ++i) size *= side;
  auto coords = std::make_shared<std::vector<int>>(size * static_cast<std::size_t>(n));
  for (std::size_t idx = 0; idx < size; ++idx) {
    std::size_t rest = idx;
    for (int i = n - 1; i >= 0; --i) {
      (*coords)[idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] =
          static_cast<int>(rest % side) - radius;
      rest /= side;
    }
  }
  cache.emplace(key, coords);
  return coords;
}

}  // namespace

LatticeBox::LatticeBox(int n, int radius) : n_(n), radius_(radius), size_(1) {
  if (n < 1 || n > kMaxDimension) throw Error("lattice dimension out of range");
  if (radius < 0) throw Error("lattice box radius must be nonnegative");
  for (int i = 0; i < n; ++i) size_ *= static_cast<std::size_t>(2 * radius + 1);
  coords_ = coordinate_table(n, radius);
}

bool LatticeBox::contains(std::span<const int> k) const noexcept {
  for (int v : k) {
    if (v < -radius_ || v > radius_) return false;
  }
  return true;
}

std::size_t LatticeBox::index_of(std::span<const int> k) const noexcept {
  std::size_t idx = 0;
  std::size_t s = static_cast<std::size_t>(side());
  for (int v : k) idx = idx * s + static_cast<std::size_t>(v + radius_);
  return idx;
}

int LatticeBox::shell(std::size_t idx) const noexcept {
  const int* k = mode_ptr(idx);
  int r = 0;
  for (int i = 0; i < n_; ++i) r = std::max(r, std::abs(k[i]));
  return r;
}

}  // namespace nct
