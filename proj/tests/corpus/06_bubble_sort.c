void sort(int *a, int n) {
  int i, j;
  for (i = 0; i < n; i++)
    for (j = 0; j + 1 < n - i; j++)
      if (a[j] > a[j + 1]) {
        int t = a[j];
        a[j] = a[j + 1];
        a[j + 1] = t;
      }
}

int main() {
  int v[8];
  int i;
  for (i = 0; i < 8; i++) v[i] = read_int();
  sort(v, 8);
  for (i = 0; i < 8; i++) print_int(v[i]);
  return 0;
}
