int apply(int op, int a, int b) {
  int r = 0;
  switch (op) {
    case 0: r = a + b; break;
    case 1: r = a - b; break;
    case 2: r = a * b; break;
    case 3:
      if (b == 0) return -1;
      r = a / b;
      break;
    case 4:
    case 5: r = a % (b == 0 ? 1 : b); break;
    default: r = 99;
  }
  return r;
}

int main() {
  int n = read_int();
  while (n > 0) {
    int op = read_int();
    int a = read_int();
    int b = read_int();
    print_int(apply(op, a, b));
    n--;
  }
  return 0;
}
