int find(int *a, int n, int key) {
  int i = 0;
  while (i < n) {
    if (a[i] == key) return i;
    i++;
  }
  return -1;
}

int firstNeg(int *a, int n) {
  int i;
  for (i = 0; i < n; i++) {
    if (a[i] >= 0) continue;
    return a[i];
  }
  return 0;
}

int main() {
  int a[6] = {4, 8, -2, 15, 16, -42};
  print_int(find(a, 6, 15));
  print_int(find(a, 6, 7));
  print_int(firstNeg(a, 6));
  print_int(firstNeg(a, 2));
  return 0;
}
