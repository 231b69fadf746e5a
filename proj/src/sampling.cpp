#include "msdarcy/sampling.hpp"

#include <cmath>
#include <random>

namespace msdarcy {

namespace {

std::vector<unsigned> first_primes(std::size_t count) {
  std::vector<unsigned> primes;
  for (unsigned c = 2; primes.size() < count; ++c) {
    bool prime = true;
    for (unsigned p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

double radical_inverse(std::uint64_t i, unsigned base) {
  const double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

QuasiRandom::QuasiRandom(std::size_t dimension, std::uint64_t seed)
    : bases_(first_primes(dimension)), shift_(dimension) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& s : shift_) s = u(rng);
}

std::vector<double> QuasiRandom::next() {
  std::vector<double> x(bases_.size());
  for (std::size_t k = 0; k < bases_.size(); ++k) {
    double v = radical_inverse(index_, bases_[k]) + shift_[k];
    x[k] = v - std::floor(v);
  }
  ++index_;
  return x;
}

}  // namespace msdarcy
