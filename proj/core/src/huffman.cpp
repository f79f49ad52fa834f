#include "colloq/huffman.hpp"

#include "colloq/core/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <tuple>

namespace colloq::huffman {

void BitWriter::put(bool bit) {
  if (size_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() = static_cast<std::uint8_t>(bytes_.back() | (0x80u >> (size_ % 8)));
  ++size_;
}

void BitWriter::put_bits(std::uint64_t value, int width) {
  for (int b = width - 1; b >= 0; --b) put(((value >> b) & 1u) != 0);
}

bool BitReader::get() {
  if (pos_ >= size_) throw Error("bit stream exhausted");
  const bool bit = (bytes_[pos_ / 8] & (0x80u >> (pos_ % 8))) != 0;
  ++pos_;
  return bit;
}

std::uint64_t BitReader::get_bits(int width) {
  std::uint64_t value = 0;
  for (int b = 0; b < width; ++b) value = (value << 1) | (get() ? 1u : 0u);
  return value;
}

HuffmanCode::HuffmanCode(std::span<const double> weights)
    : leaf_of_(weights.size(), -1), weights_(weights.begin(), weights.end()) {
  std::vector<int> order;
  order.reserve(weights.size());
  for (std::size_t s = 0; s < weights.size(); ++s) {
    if (weights[s] < 0.0 || std::isnan(weights[s])) throw DomainError("Huffman weights must be non-negative");
    if (weights[s] > 0.0) order.push_back(static_cast<int>(s));
  }
  if (order.empty()) throw DomainError("Huffman code needs at least one positive weight");
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return weights[static_cast<std::size_t>(a)] < weights[static_cast<std::size_t>(b)]; });
  // Leaves get ids in symbol order so ties break the same way as a priority
  // queue keyed on (weight, id).
  for (std::size_t s = 0; s < weights.size(); ++s) {
    if (weights[s] == 0.0) continue;
    leaf_of_[s] = static_cast<int>(nodes_.size());
    Node leaf;
    leaf.symbol = static_cast<std::int64_t>(s);
    nodes_.push_back(leaf);
  }
  std::vector<double> weight_of(nodes_.size());
  for (std::size_t s = 0; s < weights.size(); ++s) {
    if (leaf_of_[s] >= 0) weight_of[static_cast<std::size_t>(leaf_of_[s])] = weights[s];
  }

  // Two-queue construction: merged nodes are created in non-decreasing
  // weight order, so a second FIFO replaces the heap.
  std::size_t next_leaf = 0;
  std::vector<int> merged;
  std::size_t next_merged = 0;
  auto take = [&]() {
    const bool have_leaf = next_leaf < order.size();
    const bool have_merged = next_merged < merged.size();
    int leaf = -1;
    if (have_leaf) leaf = leaf_of_[static_cast<std::size_t>(order[next_leaf])];
    if (have_leaf && have_merged) {
      const int m = merged[next_merged];
      const auto key_leaf = std::make_tuple(weight_of[static_cast<std::size_t>(leaf)], leaf);
      const auto key_merged = std::make_tuple(weight_of[static_cast<std::size_t>(m)], m);
      if (key_merged < key_leaf) {
        ++next_merged;
        return m;
      }
    } else if (have_merged) {
      return merged[next_merged++];
    }
    ++next_leaf;
    return leaf;
  };
  for (std::size_t remaining = order.size(); remaining > 1; --remaining) {
    const int a = take();
    const int b = take();
    const int id = static_cast<int>(nodes_.size());
    Node parent;
    parent.child[0] = a;
    parent.child[1] = b;
    nodes_.push_back(parent);
    weight_of.push_back(weight_of[static_cast<std::size_t>(a)] + weight_of[static_cast<std::size_t>(b)]);
    nodes_[static_cast<std::size_t>(a)].parent = id;
    nodes_[static_cast<std::size_t>(b)].parent = id;
    merged.push_back(id);
  }
  root_ = static_cast<int>(nodes_.size()) - 1;
}

void HuffmanCode::encode(std::uint32_t symbol, BitWriter& out) const {
  if (symbol >= leaf_of_.size() || leaf_of_[symbol] < 0) throw DomainError("symbol has no codeword");
  std::vector<bool> path;
  for (int v = leaf_of_[symbol]; v != root_;) {
    const int parent = nodes_[static_cast<std::size_t>(v)].parent;
    path.push_back(nodes_[static_cast<std::size_t>(parent)].child[1] == v);
    v = parent;
  }
  for (auto it = path.rbegin(); it != path.rend(); ++it) out.put(*it);
}

std::uint32_t HuffmanCode::decode(BitReader& in) const {
  int v = root_;
  while (nodes_[static_cast<std::size_t>(v)].symbol < 0) {
    v = nodes_[static_cast<std::size_t>(v)].child[in.get() ? 1 : 0];
  }
  return static_cast<std::uint32_t>(nodes_[static_cast<std::size_t>(v)].symbol);
}

int HuffmanCode::length(std::uint32_t symbol) const {
  if (symbol >= leaf_of_.size() || leaf_of_[symbol] < 0) return -1;
  int depth = 0;
  for (int v = leaf_of_[symbol]; v != root_; v = nodes_[static_cast<std::size_t>(v)].parent) ++depth;
  return depth;
}

double HuffmanCode::expected_length() const {
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t s = 0; s < weights_.size(); ++s) {
    if (leaf_of_[s] < 0) continue;
    total += weights_[s];
    weighted += weights_[s] * length(static_cast<std::uint32_t>(s));
  }
  return weighted / total;
}

SubblockCoder::SubblockCoder(int chunk) : chunk_(chunk) {
  if (chunk < 1 || chunk > kMaxChunk) throw DomainError("chunk width must be in 1..16");
}

int SubblockCoder::header_width(std::size_t length) {
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(length)));
}

HuffmanCode SubblockCoder::chunk_code(int width, std::size_t ones, std::size_t length) {
  const double p = static_cast<double>(ones) / static_cast<double>(length);
  std::vector<double> by_weight(static_cast<std::size_t>(width + 1));
  for (int k = 0; k <= width; ++k) by_weight[static_cast<std::size_t>(k)] = std::pow(p, k) * std::pow(1.0 - p, width - k);
  std::vector<double> weights(std::size_t{1} << width);
  for (std::size_t s = 0; s < weights.size(); ++s) weights[s] = by_weight[static_cast<std::size_t>(std::popcount(s))];
  return HuffmanCode(weights);
}

void SubblockCoder::encode(std::span<const std::uint8_t> bits, BitWriter& out) const {
  const std::size_t length = bits.size();
  if (length == 0) return;
  const auto ones = static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
  out.put_bits(ones, header_width(length));
  if (ones == 0 || ones == length) return;

  const std::size_t full = length / static_cast<std::size_t>(chunk_);
  const int tail = static_cast<int>(length % static_cast<std::size_t>(chunk_));
  auto symbol_at = [&](std::size_t start, int width) {
    std::uint32_t s = 0;
    for (int j = 0; j < width; ++j) s |= static_cast<std::uint32_t>(bits[start + static_cast<std::size_t>(j)] & 1u) << j;
    return s;
  };
  if (full > 0) {
    const HuffmanCode code = chunk_code(chunk_, ones, length);
    for (std::size_t c = 0; c < full; ++c) code.encode(symbol_at(c * static_cast<std::size_t>(chunk_), chunk_), out);
  }
  if (tail > 0) chunk_code(tail, ones, length).encode(symbol_at(full * static_cast<std::size_t>(chunk_), tail), out);
}

std::vector<std::uint8_t> SubblockCoder::decode(std::size_t length, BitReader& in) const {
  std::vector<std::uint8_t> bits(length, 0);
  if (length == 0) return bits;
  const auto ones = static_cast<std::size_t>(in.get_bits(header_width(length)));
  if (ones > length) throw Error("corrupt subblock header");
  if (ones == 0) return bits;
  if (ones == length) {
    std::fill(bits.begin(), bits.end(), std::uint8_t{1});
    return bits;
  }
  const std::size_t full = length / static_cast<std::size_t>(chunk_);
  const int tail = static_cast<int>(length % static_cast<std::size_t>(chunk_));
  auto store = [&](std::size_t start, int width, std::uint32_t s) {
    for (int j = 0; j < width; ++j) bits[start + static_cast<std::size_t>(j)] = static_cast<std::uint8_t>((s >> j) & 1u);
  };
  if (full > 0) {
    const HuffmanCode code = chunk_code(chunk_, ones, length);
    for (std::size_t c = 0; c < full; ++c) store(c * static_cast<std::size_t>(chunk_), chunk_, code.decode(in));
  }
  if (tail > 0) {
    store(full * static_cast<std::size_t>(chunk_), tail, chunk_code(tail, ones, length).decode(in));
  }
  return bits;
}

}  // namespace colloq::huffman
