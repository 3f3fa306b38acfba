void divmod(int a, int b, int *q, int *r) {
  *q = a / b;
  *r = a % b;
}

int sumAndCount(int *v, int n, int *count) {
  int s = 0;
  int i;
  *count = 0;
  for (i = 0; i < n; i++) {
    if (v[i] > 0) {
      s += v[i];
      *count = *count + 1;
    }
  }
  return s;
}

int main() {
  int q, r, c;
  int v[5] = {3, -1, 4, -1, 5};
  divmod(47, 5, &q, &r);
  print_int(q);
  print_int(r);
  print_int(sumAndCount(v, 5, &c));
  print_int(c);
  return 0;
}
