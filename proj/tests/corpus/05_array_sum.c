int data[10] = {3, 1, 4, 1, 5, 9, 2, 6, 5, 3};

int sum(int *a, int n) {
  int s = 0;
  int i;
  for (i = 0; i < n; i++) s += a[i];
  return s;
}

int maxOf(int *a, int n) {
  int m = a[0];
  int i;
  for (i = 1; i < n; ++i)
    if (a[i] > m) m = a[i];
  return m;
}

int main() {
  print_int(sum(data, 10));
  print_int(maxOf(data, 10));
  print_int(sum(data + 5, 3));
  return 0;
}
