int clamp(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

int inRange(int v) { return v >= 0 && v < 10; }

int either(int a, int b) { return a == 0 || b == 0; }

int main() {
  int i;
  for (i = -3; i < 14; i += 4) {
    print_int(clamp(i, 0, 9));
    print_int(inRange(i));
    print_int(either(i, i - 5));
  }
  return 0;
}
