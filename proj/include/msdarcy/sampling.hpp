#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace msdarcy {

/// Halton sequence with a seeded Cranley-Patterson rotation; points lie in
/// [0,1)^dimension and the stream is fully determined by (dimension, seed).
class QuasiRandom {
 public:
  QuasiRandom(std::size_t dimension, std::uint64_t seed);

  std::size_t dimension() const noexcept { return bases_.size(); }
  std::vector<double> next();

 private:
  std::vector<unsigned> bases_;
  std::vector<double> shift_;
  std::uint64_t index_ = 1;
};

}  // namespace msdarcy
