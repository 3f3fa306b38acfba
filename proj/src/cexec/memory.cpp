#include "c2pl/cexec/memory.hpp"

#include <cstring>
#include <sstream>

#include "c2pl/error.hpp"
#include "c2pl/frontend/ast.hpp"

namespace c2pl {

static_assert(SimMemory::kHeapBase > kGlobalBase);

std::string hexAddress(int64_t addr) {
  std::ostringstream os;
  os << "0x" << std::hex << static_cast<uint64_t>(addr);
  return os.str();
}

SimMemory::SimMemory(int64_t globalsEnd, int64_t heapLimit, int64_t stackLimit)
    : heapLimit_(heapLimit), stackLimit_(stackLimit) {
  if (globalsEnd < kGlobalBase_ || globalsEnd > kHeapBase) fail(ErrorCode::Oom, "globals do not fit");
  globals_.assign(static_cast<size_t>(globalsEnd - kGlobalBase_), 0);
  stack_.reserve(1 << 16);
}

const uint8_t* SimMemory::resolve(int64_t addr, int64_t n) const {
  auto inside = [&](int64_t base, size_t used) {
    return addr >= base && n >= 0 && addr - base <= static_cast<int64_t>(used) &&
           static_cast<int64_t>(used) - (addr - base) >= n;
  };
  if (inside(kGlobalBase_, globals_.size())) return globals_.data() + (addr - kGlobalBase_);
  if (inside(kHeapBase, heap_.size())) return heap_.data() + (addr - kHeapBase);
  if (inside(kStackBase, stackUsed_)) return stack_.data() + (addr - kStackBase);
  fail(ErrorCode::Segv, "invalid access of " + std::to_string(n) + " bytes at address " + hexAddress(addr));
}

uint8_t* SimMemory::resolve(int64_t addr, int64_t n) {
  return const_cast<uint8_t*>(static_cast<const SimMemory*>(this)->resolve(addr, n));
}

uint64_t SimMemory::loadInt(int64_t addr, int size) const {
  if (size != 1 && size != 2 && size != 4 && size != 8) fail(ErrorCode::Type, "bad load size " + std::to_string(size));
  const uint8_t* p = resolve(addr, size);
  uint64_t v = 0;
  for (int i = size - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void SimMemory::storeInt(int64_t addr, int size, uint64_t value) {
  if (size != 1 && size != 2 && size != 4 && size != 8) fail(ErrorCode::Type, "bad store size " + std::to_string(size));
  uint8_t* p = resolve(addr, size);
  for (int i = 0; i < size; ++i) p[i] = static_cast<uint8_t>(value >> (8 * i));
}

double SimMemory::loadFloat(int64_t addr, int size) const {
  if (size == 4) {
    auto bits = static_cast<uint32_t>(loadInt(addr, 4));
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
  }
  if (size == 8) {
    uint64_t bits = loadInt(addr, 8);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
  }
  fail(ErrorCode::Type, "bad float load size " + std::to_string(size));
}

void SimMemory::storeFloat(int64_t addr, int size, double value) {
  if (size == 4) {
    auto f = static_cast<float>(value);
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    storeInt(addr, 4, bits);
  } else if (size == 8) {
    uint64_t bits;
    std::memcpy(&bits, &value, 8);
    storeInt(addr, 8, bits);
  } else {
    fail(ErrorCode::Type, "bad float store size " + std::to_string(size));
  }
}

void SimMemory::fill(int64_t addr, uint8_t byte, int64_t n) {
  if (n == 0) return;
  if (n < 0) fail(ErrorCode::Segv, "negative fill length");
  std::memset(resolve(addr, n), byte, static_cast<size_t>(n));
}

void SimMemory::copy(int64_t dst, int64_t src, int64_t n) {
  if (n == 0) return;
  if (n < 0) fail(ErrorCode::Segv, "negative copy length");
  const uint8_t* s = resolve(src, n);
  uint8_t* d = resolve(dst, n);
  std::memmove(d, s, static_cast<size_t>(n));
}

int64_t SimMemory::malloc(int64_t n) {
  if (n < 0 || n > heapLimit_) fail(ErrorCode::Oom, "malloc of " + std::to_string(n) + " bytes");
  size_t start = (heap_.size() + 15) / 16 * 16;
  if (static_cast<int64_t>(start) + n > heapLimit_) fail(ErrorCode::Oom, "heap exhausted");
  heap_.resize(start + static_cast<size_t>(std::max<int64_t>(n, 1)), 0);
  return kHeapBase + static_cast<int64_t>(start);
}

int64_t SimMemory::stackAlloc(int64_t size, int64_t align) {
  if (size < 0) fail(ErrorCode::Oom, "negative stack allocation");
  if (align < 1) align = 1;
  size_t start = (stackUsed_ + static_cast<size_t>(align) - 1) / static_cast<size_t>(align) * static_cast<size_t>(align);
  size_t end = start + static_cast<size_t>(size);
  if (static_cast<int64_t>(end) > stackLimit_) fail(ErrorCode::Oom, "simulated stack exhausted");
  if (end > stack_.size()) stack_.resize(end);
  std::memset(stack_.data() + stackUsed_, 0, end - stackUsed_);
  stackUsed_ = end;
  return kStackBase + static_cast<int64_t>(start);
}

void SimMemory::stackRelease(int64_t mark) {
  int64_t off = mark - kStackBase;
  if (off < 0 || off > static_cast<int64_t>(stackUsed_)) fail(ErrorCode::State, "bad stack release mark");
  stackUsed_ = static_cast<size_t>(off);
}

}  // namespace c2pl
