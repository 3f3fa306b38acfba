double poly(double x) { return 3.0 * x * x - 2.0 * x + 0.5; }

float halve(float f) { return f / 2.0f; }

double average(int *v, int n) {
  double s = 0.0;
  int i;
  for (i = 0; i < n; i++) s += v[i];
  return s / n;
}

int main() {
  int v[4] = {1, 2, 3, 5};
  print_float(poly(1.5));
  print_float(halve(3.2f));
  print_float(average(v, 4));
  print_int((int)(poly(2.0) * 10.0));
  return 0;
}
