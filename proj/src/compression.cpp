#include "nctorus/compression.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <deque>
#include <istream>
#include <ostream>

#include "nctorus/error.hpp"

namespace nct {

double CompressedOperator::hermitian_residual() const {
  if (matrix.size() == 0) return 0.0;
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

std::size_t CompressedOperator::position_of(std::size_t box_index) const noexcept {
  auto it = std::lower_bound(modes.begin(), modes.end(), box_index);
  if (it == modes.end() || *it != box_index) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(it - modes.begin());
}

CompressedOperator compress_left_multiplication(const AlgebraElement& x, const LatticeBox& box) {
  return compress_left_multiplication(TorusMatrix::from_element(x), box);
}

CompressedOperator compress_left_multiplication(const TorusMatrix& x, const LatticeBox& box) {
  std::vector<std::size_t> all(box.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return compress_on_modes(x, box, std::move(all));
}

CompressedOperator compress_on_modes(const TorusMatrix& x, const LatticeBox& box, std::vector<std::size_t> modes) {
  const int n = x.geometry().dim();
  if (box.dim() != n) throw GeometryMismatch("box dimension differs from the torus dimension");
  std::sort(modes.begin(), modes.end());
  const std::size_t m = x.size();
  const std::size_t d = modes.size();
  const int rx = x.radius();
  CompressedOperator op;
  op.dim_n = n;
  op.box_radius = box.radius();
  op.blocks = m;
  op.modes = modes;
  op.provenance = "left multiplication, " + std::to_string(m) + "x" + std::to_string(m) + " matrix of radius " +
                  std::to_string(rx) + " on box radius " + std::to_string(box.radius());
  op.matrix = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(m * d), static_cast<Eigen::Index>(m * d));

  CocycleEvaluator sigma(x.geometry(), 2 * std::max(rx, 1) * std::max(box.radius(), 1));
  const LatticeBox& xb = x(0, 0).box();
  std::vector<int> diff(static_cast<std::size_t>(n));
  for (std::size_t b = 0; b < d; ++b) {
    const int* q = box.mode_ptr(modes[b]);
    for (std::size_t a = 0; a < d; ++a) {
      const int* k = box.mode_ptr(modes[a]);
      bool inside = true;
      for (int i = 0; i < n; ++i) {
        int v = k[i] - q[i];
        if (v < -rx || v > rx) {
          inside = false;
          break;
        }
        diff[static_cast<std::size_t>(i)] = v;
      }
      if (!inside) continue;
      std::size_t xi = xb.index_of(diff);
      Complex phase = sigma(diff.data(), q);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          Complex c = x(i, j)[xi];
          if (c == Complex{}) continue;
          op.matrix(static_cast<Eigen::Index>(i * d + a), static_cast<Eigen::Index>(j * d + b)) = c * phase;
        }
      }
    }
  }
  return op;
}

std::vector<std::size_t> reachable_modes(const TorusMatrix& x, const LatticeBox& box) {
  const int n = x.geometry().dim();
  const LatticeBox& xb = x(0, 0).box();
  std::vector<std::vector<int>> steps;
  for (std::size_t idx = 0; idx < xb.size(); ++idx) {
    bool nonzero = false;
    for (const auto& e : x.entries()) {
      if (e[idx] != Complex{} || e[xb.negated_index(idx)] != Complex{}) {
        nonzero = true;
        break;
      }
    }
    if (!nonzero || idx == xb.center_index()) continue;
    auto k = xb.mode(idx);
    steps.emplace_back(k.begin(), k.end());
  }
  std::vector<char> seen(box.size(), 0);
  std::deque<std::size_t> queue;
  queue.push_back(box.center_index());
  seen[box.center_index()] = 1;
  std::vector<int> next(static_cast<std::size_t>(n));
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    const int* k = box.mode_ptr(cur);
    for (const auto& s : steps) {
      for (int i = 0; i < n; ++i) next[static_cast<std::size_t>(i)] = k[i] + s[static_cast<std::size_t>(i)];
      if (!box.contains(next)) continue;
      std::size_t j = box.index_of(next);
      if (!seen[j]) {
        seen[j] = 1;
        queue.push_back(j);
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(i);
  }
  return out;
}

namespace {

template <typename T>
void put_le(std::ostream& os, T v) {
  std::array<unsigned char, sizeof(T)> bytes{};
  std::uint64_t bits = 0;
  if constexpr (std::is_floating_point_v<T>) {
    static_assert(sizeof(T) == 8);
    std::memcpy(&bits, &v, 8);
  } else {
    bits = static_cast<std::uint64_t>(v);
  }
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
  os.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> bytes{};
  is.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
  if (!is) throw Error("truncated operator cache");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  if constexpr (std::is_floating_point_v<T>) {
    T v;
    std::memcpy(&v, &bits, 8);
    return v;
  } else {
    return static_cast<T>(bits);
  }
}

constexpr char kMagic[4] = {'N', 'C', 'T', 'C'};

}  // namespace

void write_operator_cache(std::ostream& os, const CompressedOperator& op, const TorusGeometry& g) {
  os.write(kMagic, 4);
  put_le<std::uint32_t>(os, 1);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim()));
  put_le<std::uint64_t>(os, g.digest());
  put_le<std::int32_t>(os, op.box_radius);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(op.blocks));
  put_le<std::uint64_t>(os, op.modes.size());
  for (std::size_t k : op.modes) put_le<std::uint64_t>(os, k);
  for (Eigen::Index r = 0; r < op.matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < op.matrix.cols(); ++c) {
      put_le<double>(os, op.matrix(r, c).real());
      put_le<double>(os, op.matrix(r, c).imag());
    }
  }
  if (!os) throw Error("failed to write operator cache");
}

CompressedOperator read_operator_cache(std::istream& is, const TorusGeometry& g) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw Error("not an operator cache");
  if (get_le<std::uint32_t>(is) != 1) throw Error("unsupported operator cache version");
  auto n = get_le<std::uint32_t>(is);
  auto digest = get_le<std::uint64_t>(is);
  if (static_cast<int>(n) != g.dim() || digest != g.digest()) {
    throw GeometryMismatch("operator cache was written for a different torus");
  }
  CompressedOperator op;
  op.dim_n = static_cast<int>(n);
  op.box_radius = get_le<std::int32_t>(is);
  op.blocks = get_le<std::uint32_t>(is);
  auto count = get_le<std::uint64_t>(is);
  LatticeBox box(op.dim_n, op.box_radius);
  if (count > box.size()) throw Error("corrupt operator cache: too many modes");
  op.modes.resize(count);
  for (auto& k : op.modes) {
    k = get_le<std::uint64_t>(is);
    if (k >= box.size()) throw Error("corrupt operator cache: mode index out of range");
  }
  auto dim = static_cast<Eigen::Index>(op.blocks * count);
  op.matrix.resize(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      double re = get_le<double>(is);
      double im = get_le<double>(is);
      op.matrix(r, c) = Complex(re, im);
    }
  }
  op.provenance = "operator cache";
  return op;
}

}  // namespace nct
