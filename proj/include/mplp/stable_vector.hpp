#pragma once

#include <atomic>
#include <cassert>
#include <cstddef>
#include <memory>
#include <utility>

namespace mplp {

/// Append-only segmented vector with stable element addresses.
///
/// Appends must be serialized by the caller. Reads of any index below
/// `size()` are safe from any thread concurrently with appends: chunks are
/// never moved and the size is published with release semantics.
template <typename T, std::size_t ChunkBits = 12, std::size_t MaxChunks = (1u << 12)>
class StableVector {
 public:
  static constexpr std::size_t kChunkSize = std::size_t{1} << ChunkBits;

  StableVector() : chunks_(std::make_unique<std::atomic<T*>[]>(MaxChunks)) {
    for (std::size_t c = 0; c < MaxChunks; ++c) chunks_[c].store(nullptr, std::memory_order_relaxed);
  }
  StableVector(const StableVector&) = delete;
  StableVector& operator=(const StableVector&) = delete;

  ~StableVector() {
    const std::size_t n = size_.load(std::memory_order_acquire);
    for (std::size_t i = 0; i < n; ++i) slot(i)->~T();
    for (std::size_t c = 0; c < MaxChunks; ++c) {
      T* p = chunks_[c].load(std::memory_order_relaxed);
      if (p) std::allocator<T>{}.deallocate(p, kChunkSize);
    }
  }

  std::size_t size() const { return size_.load(std::memory_order_acquire); }
  bool empty() const { return size() == 0; }

  template <typename... Args>
  std::size_t emplace_back(Args&&... args) {
    const std::size_t i = size_.load(std::memory_order_relaxed);
    const std::size_t c = i >> ChunkBits;
    assert(c < MaxChunks && "StableVector capacity exceeded");
    if (chunks_[c].load(std::memory_order_relaxed) == nullptr) {
      chunks_[c].store(std::allocator<T>{}.allocate(kChunkSize), std::memory_order_release);
    }
    ::new (static_cast<void*>(slot(i))) T(std::forward<Args>(args)...);
    size_.store(i + 1, std::memory_order_release);
    return i;
  }

  T& operator[](std::size_t i) {
    assert(i < size());
    return *slot(i);
  }
  const T& operator[](std::size_t i) const {
    assert(i < size());
    return *slot(i);
  }

 private:
  T* slot(std::size_t i) const {
    return chunks_[i >> ChunkBits].load(std::memory_order_acquire) + (i & (kChunkSize - 1));
  }

  std::unique_ptr<std::atomic<T*>[]> chunks_;
  std::atomic<std::size_t> size_{0};
};

}  // namespace mplp
