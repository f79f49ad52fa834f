#include "colloq/core/rng.hpp"

#include "colloq/core/error.hpp"

#include <algorithm>
#include <limits>

namespace colloq {

std::uint64_t Rng::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  if (hi < lo) throw DomainError("Rng::uniform_int: empty range");
  const std::uint64_t span = hi - lo;
  if (span == std::numeric_limits<std::uint64_t>::max()) return engine_();
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return lo + draw % range;
}

std::vector<double> Rng::sorted_uniforms(std::size_t n, double lo, double hi) {
  std::vector<double> out(n);
  for (auto& v : out) v = lo + (hi - lo) * uniform();
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace colloq
