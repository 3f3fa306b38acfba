int mul(int a, int b) { return a * b; }
int add(int a, int b) { return a + b; }
int neg(int a) { return -a; }
int divi(int a, int b) { return a / b; }
int remi(int a, int b) { return a % b; }

int main() {
  print_int(mul(65536, 65536));
  print_int(add(2147483647, 1));
  print_int(neg(-2147483647 - 1));
  print_int(divi(-7, 2));
  print_int(remi(-7, 2));
  print_int(divi(-2147483647 - 1, -1));
  print_int(remi(-2147483647 - 1, -1));
  return 0;
}
