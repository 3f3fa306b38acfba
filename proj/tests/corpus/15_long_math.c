long power(long b, int e) {
  long r = 1;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

unsigned long umix(unsigned long x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdUL;
  x ^= x >> 33;
  return x;
}

int main() {
  print_int(power(3, 13));
  print_int(power(2, 62));
  print_int(power(7, 40));
  print_int((long)umix(12345UL));
  print_int((long)(umix(99UL) >> 40));
  return 0;
}
