int digits(int n) {
  int c = 0;
  do {
    c++;
    n /= 10;
  } while (n != 0);
  return c;
}

int reverse(int n) {
  int r = 0;
  do {
    if (n == 0) break;
    r = r * 10 + n % 10;
    n = n / 10;
  } while (1);
  return r;
}

int main() {
  print_int(digits(0));
  print_int(digits(12345));
  print_int(reverse(12345));
  print_int(reverse(1200));
  return 0;
}
