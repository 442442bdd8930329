#include "ansflow/grid.hpp"

namespace ansflow {

std::string to_string(const Wavevector& k) {
  return "(" + std::to_string(k.k1) + "," + std::to_string(k.k2) + ")";
}

TorusGrid::TorusGrid(int n1, int n2) : n1_(n1), n2_(n2) {
  if (n1 < 4 || n2 < 4 || n1 % 2 != 0 || n2 % 2 != 0) {
    throw Error("TorusGrid: mode counts must be even and >= 4, got " + std::to_string(n1) + "x" +
                std::to_string(n2));
  }
}

std::optional<std::size_t> TorusGrid::index_of(const Wavevector& k) const {
  auto axis = [](int kk, int n) -> std::optional<int> {
    if (kk > n / 2 || kk <= -n / 2) return std::nullopt;
    return kk >= 0 ? kk : kk + n;
  };
  const auto i1 = axis(k.k1, n1_);
  const auto i2 = axis(k.k2, n2_);
  if (!i1 || !i2) return std::nullopt;
  return flat(*i1, *i2);
}

std::size_t TorusGrid::conjugate_index(std::size_t f) const {
  const int i1 = static_cast<int>(f / static_cast<std::size_t>(n2_));
  const int i2 = static_cast<int>(f % static_cast<std::size_t>(n2_));
  return flat((n1_ - i1) % n1_, (n2_ - i2) % n2_);
}

}  // namespace ansflow
