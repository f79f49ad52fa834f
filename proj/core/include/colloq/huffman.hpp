#pragma once

// Bit streams and a deterministic Huffman coder for the block simulators.

#include <cstdint>
#include <span>
#include <vector>

namespace colloq::huffman {

class BitWriter {
 public:
  void put(bool bit);
  /// The low `width` bits of value, most significant first.
  void put_bits(std::uint64_t value, int width);

  std::uint64_t size() const { return size_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t size_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const BitWriter& source) : bytes_(source.bytes()), size_(source.size()) {}

  /// Throws colloq::Error past the end of the stream.
  bool get();
  std::uint64_t get_bits(int width);

  std::uint64_t position() const { return pos_; }
  bool exhausted() const { return pos_ == size_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t size_;
  std::uint64_t pos_ = 0;
};

/// Huffman code over symbols 0..weights.size()-1. Symbols of zero weight get
/// no codeword. Ties merge by (weight, node id), leaves numbered by symbol
/// and internal nodes after them, so equal inputs give equal codes.
class HuffmanCode {
 public:
  /// Throws DomainError if no weight is positive or any is negative.
  explicit HuffmanCode(std::span<const double> weights);

  /// A code with a single positive-weight symbol has length 0 and writes
  /// nothing.
  void encode(std::uint32_t symbol, BitWriter& out) const;
  std::uint32_t decode(BitReader& in) const;

  /// Codeword length, or -1 for a symbol without a codeword.
  int length(std::uint32_t symbol) const;
  /// Σ wᵢ·lᵢ / Σ wᵢ.
  double expected_length() const;
  std::size_t symbols() const { return leaf_of_.size(); }

 private:
  struct Node {
    int parent = -1;
    int child[2] = {-1, -1};
    std::int64_t symbol = -1;
  };

  std::vector<Node> nodes_;
  std::vector<int> leaf_of_;
  std::vector<double> weights_;
  int root_ = -1;
};

/// Zero-error code for one subblock of L bits. The sender announces the
/// number of ones w in ceil(log₂(L+1)) bits, then Huffman-codes the bits in
/// chunks of `chunk` bits with the i.i.d. code for p̂ = w/L, the final
/// partial chunk with its own code. Receivers know L from the transcript,
/// so nothing is sent when L = 0.
class SubblockCoder {
 public:
  static constexpr int kMaxChunk = 16;

  explicit SubblockCoder(int chunk = kMaxChunk);

  void encode(std::span<const std::uint8_t> bits, BitWriter& out) const;
  std::vector<std::uint8_t> decode(std::size_t length, BitReader& in) const;

  static int header_width(std::size_t length);

 private:
  static HuffmanCode chunk_code(int width, std::size_t ones, std::size_t length);

  int chunk_;
};

}  // namespace colloq::huffman
