void swap(int *x, int *y) {
  int t = *x;
  *x = *y;
  *y = t;
}

int main() {
  int a = 3, b = 4;
  swap(&a, &b);
  print_int(a);
  print_int(b);
  swap(&a, &a);
  print_int(a);
  return 0;
}
