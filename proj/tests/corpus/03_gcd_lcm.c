int gcd(int a, int b) {
  while (b != 0) {
    int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long lcm(long a, long b) { return a / gcd((int)a, (int)b) * b; }

int main() {
  print_int(gcd(1071, 462));
  print_int(gcd(17, 5));
  print_int(lcm(21, 6));
  print_int(lcm(100000, 99991));
  return 0;
}
