#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "c2pl/engine/memory_port.hpp"

namespace c2pl {

/// Flat little-endian memory with four disjoint regions:
///
///   [0, kFuncBase)                 null guard, never accessible
///   [kFuncBase, kGlobalBase)       function addresses, never accessible
///   [kGlobalBase, globalsEnd)      globals, fixed at construction
///   [heapBase, heapBase + brk)     bump heap (malloc)
///   [stackBase, stackBase + top)   frames, released in LIFO order
///
/// Every access must lie entirely inside the live part of one region.
class SimMemory : public MemoryPort {
 public:
  static constexpr int64_t kHeapBase = 0x10000000;
  static constexpr int64_t kStackBase = 0x40000000;
  static constexpr int64_t kDefaultHeapLimit = 256 << 20;
  static constexpr int64_t kDefaultStackLimit = 256 << 20;

  explicit SimMemory(int64_t globalsEnd, int64_t heapLimit = kDefaultHeapLimit,
                     int64_t stackLimit = kDefaultStackLimit);

  uint64_t loadInt(int64_t addr, int size) const override;
  void storeInt(int64_t addr, int size, uint64_t value) override;
  double loadFloat(int64_t addr, int size) const override;
  void storeFloat(int64_t addr, int size, double value) override;

  void fill(int64_t addr, uint8_t byte, int64_t n);
  /// Overlap-safe copy.
  void copy(int64_t dst, int64_t src, int64_t n);

  /// Zero-filled, 16-byte aligned; E_OOM when the heap limit is reached.
  int64_t malloc(int64_t n);

  /// Zero-filled stack block; E_OOM when the stack limit is reached.
  int64_t stackAlloc(int64_t size, int64_t align = 8);
  int64_t stackTop() const { return kStackBase + static_cast<int64_t>(stackUsed_); }
  /// Releases everything allocated at or above mark (a previous stackTop()).
  void stackRelease(int64_t mark);

  int64_t heapUsed() const { return static_cast<int64_t>(heap_.size()); }
  int64_t globalsEnd() const { return kGlobalBase_ + static_cast<int64_t>(globals_.size()); }

 private:
  static constexpr int64_t kGlobalBase_ = 0x10000;

  const uint8_t* resolve(int64_t addr, int64_t n) const;
  uint8_t* resolve(int64_t addr, int64_t n);

  std::vector<uint8_t> globals_;
  std::vector<uint8_t> heap_;
  std::vector<uint8_t> stack_;
  size_t stackUsed_ = 0;
  int64_t heapLimit_;
  int64_t stackLimit_;
};

std::string hexAddress(int64_t addr);

}  // namespace c2pl
