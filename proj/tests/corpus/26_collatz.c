int steps(long n) {
  int s = 0;
  while (n != 1) {
    if (n % 2 == 0)
      n = n / 2;
    else
      n = 3 * n + 1;
    s++;
  }
  return s;
}

int main() {
  int k = read_int();
  while (k-- > 0) print_int(steps(read_int()));
  return 0;
}
