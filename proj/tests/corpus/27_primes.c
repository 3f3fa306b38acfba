int isPrime(int n) {
  int d;
  if (n < 2) return 0;
  for (d = 2; d * d <= n; d++)
    if (n % d == 0) return 0;
  return 1;
}

int countPrimes(int limit) {
  int c = 0;
  int i;
  for (i = 0; i < limit; i++) c += isPrime(i);
  return c;
}

int main() {
  print_int(countPrimes(100));
  print_int(isPrime(97));
  print_int(isPrime(91));
  return 0;
}
