int popcount(unsigned v) {
  int c = 0;
  while (v) {
    c += (int)(v & 1u);
    v >>= 1;
  }
  return c;
}

int parity(unsigned v) { return popcount(v) & 1; }

int highestBit(long v) {
  int b = -1;
  while (v > 0) {
    b++;
    v = v >> 1;
  }
  return b;
}

int main() {
  print_int(popcount(0xF0F0u));
  print_int(parity(7u));
  print_int(highestBit(1L << 40));
  print_int(~5);
  print_int(-17 >> 2);
  return 0;
}
