#pragma once

#include <cstdint>

namespace c2pl {

/// Byte-addressable little-endian memory as seen by the foreign memory
/// predicates. Implementations throw E_SEGV for addresses outside live
/// storage.
class MemoryPort {
 public:
  virtual ~MemoryPort() = default;
  /// Zero-extended load of size bytes (1, 2, 4 or 8).
  virtual uint64_t loadInt(int64_t addr, int size) const = 0;
  virtual void storeInt(int64_t addr, int size, uint64_t value) = 0;
  /// size 4 reads binary32, size 8 binary64.
  virtual double loadFloat(int64_t addr, int size) const = 0;
  virtual void storeFloat(int64_t addr, int size, double value) = 0;
};

}  // namespace c2pl
